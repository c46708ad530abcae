#pragma once

#include "cert/value.hpp"

#include <string>
#include <vector>

namespace cert {

struct CorpusEntry {
  std::string name;
  std::string path;
  CType type;  // documented type of the unapplied program
  std::vector<std::string> arg_text;
  std::vector<RunValue> args;
  /// False for entries only the sampler runs.
  bool discrete = true;
  /// Closed-form family for the expected cost, or empty.
  std::string oracle;
  CompPtr program;

  /// The program applied to its arguments (a computation of type F τ).
  CompPtr applied() const;
};

/// Reads `dir/corpus.json`, parses every program and checks its documented
/// type. Throws CertError (or a parse/type error) on any mismatch.
std::vector<CorpusEntry> load_corpus(const std::string& dir);

const CorpusEntry& find_entry(const std::vector<CorpusEntry>& corpus, const std::string& name);

std::string read_file(const std::string& path);

/// Parses and type-checks a program file.
CompPtr load_program(const std::string& path);

}  // namespace cert
