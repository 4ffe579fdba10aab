#include "judgeaudit/prompt.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "judgeaudit/errors.hpp"

namespace judgeaudit {

namespace {

// Built-in prompt bodies. Kept byte-for-byte stable: downstream golden
// reports hash the rendered text.
constexpr const char* kMtqeTemplate =
    "Please analyze the given source and translated sentences and output a translation quality "
    "score on a continuous scale ranging from {{min score}} to {{max score}}.\n"
    "Translation quality should be evaluated based on both fluency and adequacy.\n"
    "A score close to {{min score}} indicates a low quality translation, while a score close to "
    "{{max score}} indicates a high quality translation.\n"
    "Do not provide any explanations or text apart from the score.\n"
    "\n"
    "{{source language}} Sentence: {{src_i}}\n"
    "{{target language}} Sentence: {{hyp_i}}\n"
    "Score:";

constexpr const char* kGecqeTemplate =
    "Please analyze the given original and corrected sentences and output a grammatical error "
    "correction quality score on a integer scale ranging from {{min score}} to {{max score}}.\n"
    "A score close to {{min score}} indicates a low quality correction , while a score close to "
    "{{max score}} indicates a high quality correction.\n"
    "Do not provide any explanations or text apart from the score.\n"
    "\n"
    "Original sentence: {{org_i}}\n"
    "Corrected sentence: {{cor_i}}\n"
    "Score:";

constexpr const char* kLcpTemplate =
    "Please analyze the given sentence and word included in the sentence and output a complexity "
    "score on a integer scale ranging from {{min score}} to {{max score}}.\n"
    "The complexity score should be evaluated based on the difficulty of the word included in the "
    "sentence.\n"
    "A score closer to {{min score}} indicates that the word is easy, while a score closer to "
    "{{max score}} indicates that the word is difficult.\n"
    "Do not provide any explanations or text apart from the score.\n"
    "\n"
    "Sentence: {{sent_i}}\n"
    "Word: {{word_i}}\n"
    "Score:";

void replace_all(std::string& text, const std::string& needle, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), value);
    pos += value.size();
  }
}

std::vector<std::pair<std::string, std::string>> placeholder_values(const Example& ex,
                                                                    const ScoreRange& range) {
  return {
      {"min score", std::to_string(range.min)},
      {"max score", std::to_string(range.max)},
      {"source language", ex.source_lang},
      {"target language", ex.target_lang},
      {"src_i", ex.source},
      {"hyp_i", ex.hypothesis},
      {"org_i", ex.original},
      {"cor_i", ex.corrected},
      {"sent_i", ex.sentence},
      {"word_i", ex.word},
  };
}

}  // namespace

PromptTemplate builtin_template(Task task) {
  switch (task) {
    case Task::kMtqe: return {task, kMtqeTemplate};
    case Task::kGecqe: return {task, kGecqeTemplate};
    case Task::kLcp: return {task, kLcpTemplate};
  }
  return {task, kMtqeTemplate};
}

PromptTemplate load_template_file(const std::string& path, Task task) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open template file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string body = buffer.str();
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) {
    body.pop_back();
  }
  const auto last_line_start = body.rfind('\n');
  const std::string last_line =
      last_line_start == std::string::npos ? body : body.substr(last_line_start + 1);
  if (last_line != "Score:") {
    throw ParseError("template file must end with the line \"Score:\": " + path);
  }
  return {task, std::move(body)};
}

std::string render_prompt(const PromptTemplate& tmpl, const Example& example,
                          const ScoreRange& range) {
  std::string text = tmpl.body;
  for (const auto& [name, value] : placeholder_values(example, range)) {
    replace_all(text, "{{" + name + "}}", value);
  }

  const auto open = text.find("{{");
  if (open != std::string::npos) {
    const auto close = text.find("}}", open);
    const std::string name = close == std::string::npos
                                 ? text.substr(open)
                                 : text.substr(open + 2, close - open - 2);
    throw ParseError("unresolved placeholder '" + name + "' in prompt template");
  }
  return text;
}

}  // namespace judgeaudit
