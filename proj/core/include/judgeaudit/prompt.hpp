#pragma once

#include <string>

#include "judgeaudit/dataset.hpp"

namespace judgeaudit {

/// Prompt text with double-brace placeholders ({{min score}}, {{max score}},
/// task fields). The body ends with the literal line "Score:".
struct PromptTemplate {
  Task task = Task::kMtqe;
  std::string body;
};

/// The built-in template for a task.
PromptTemplate builtin_template(Task task);

/// Reads a custom template (UTF-8, same placeholder grammar). Trailing
/// newlines are stripped; the last line must be "Score:".
PromptTemplate load_template_file(const std::string& path, Task task);

/// Substitutes the score range and example fields into the template.
/// Deterministic; throws ParseError naming any unresolved placeholder.
std::string render_prompt(const PromptTemplate& tmpl, const Example& example,
                          const ScoreRange& range);

}  // namespace judgeaudit
