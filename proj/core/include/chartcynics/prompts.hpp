#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace chartcynics {

struct PromptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PromptTemplate {
    std::string id;
    std::string text;
};

struct TemplateSet {
    PromptTemplate diagnostic;
    PromptTemplate reasoning;
    PromptTemplate fusion;
};

TemplateSet builtin_templates();

// Looks for diagnostic.txt / reasoning.txt / fusion.txt in `dir`; roles
// without a file keep the built-in template. Loaded templates get the id
// "custom:<filename>".
TemplateSet load_templates(const std::string& dir);

// Empty dir returns the built-ins.
TemplateSet resolve_templates(const std::string& dir);

// Replaces every {{key}} with values.at(key). An unresolved placeholder is an
// error naming it.
std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& values);

}  // namespace chartcynics
