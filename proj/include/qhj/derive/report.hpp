#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace qhj::derive {

// One replayed step: the expression the pipeline produced, the frozen
// reference it must equal, and whether the two agree symbolically.
// `produced` and `expected` are both printed in canonical form, so a mismatch
// is readable as a diff of two normalized strings.
struct StepResult {
  std::string label;        // golden label the step is checked against
  std::string note;         // normalization applied before the comparison
  std::string produced;     // canonical print of the pipeline output
  std::string expected;     // canonical print of the parsed golden
  std::string golden_text;  // verbatim stored text
  bool matched = false;
};

struct DerivationReport {
  std::string pipeline;
  std::vector<StepResult> steps;
  std::vector<std::string> notes;  // informational, never gating
  bool pass = true;

  void add(StepResult step) {
    pass = pass && step.matched;
    steps.push_back(std::move(step));
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["pipeline"] = pipeline;
    j["pass"] = pass;
    j["steps"] = nlohmann::ordered_json::array();
    for (const auto& s : steps) {
      nlohmann::ordered_json js;
      js["label"] = s.label;
      js["matched"] = s.matched;
      if (!s.note.empty()) js["note"] = s.note;
      js["produced"] = s.produced;
      js["expected"] = s.expected;
      js["golden"] = s.golden_text;
      j["steps"].push_back(std::move(js));
    }
    j["notes"] = notes;
    return j;
  }

  std::string transcript() const {
    std::string out = "pipeline: " + pipeline + "\n";
    for (const auto& s : steps) {
      out += s.matched ? "[ok]   " : "[FAIL] ";
      out += s.label;
      if (!s.note.empty()) out += "  (" + s.note + ")";
      out += "\n       produced: " + s.produced + "\n";
      if (!s.matched) out += "       expected: " + s.expected + "\n";
    }
    for (const auto& n : notes) out += "note: " + n + "\n";
    out += pass ? "result: pass\n" : "result: FAIL\n";
    return out;
  }
};

}  // namespace qhj::derive
