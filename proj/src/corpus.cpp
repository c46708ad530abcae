#include "cert/corpus.hpp"

#include "cert/parse.hpp"
#include "cert/typecheck.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace cert {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CertError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CompPtr load_program(const std::string& path) {
  auto t = parse(read_file(path));
  check_program(t);
  return t;
}

CompPtr CorpusEntry::applied() const {
  CompPtr t = program;
  for (const auto& a : args) t = mk::app(t, a);
  return t;
}

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  auto manifest = nlohmann::json::parse(read_file((fs::path(dir) / "corpus.json").string()));
  std::vector<CorpusEntry> out;
  for (const auto& j : manifest) {
    CorpusEntry e;
    e.name = j.at("name").get<std::string>();
    e.path = (fs::path(dir) / j.at("file").get<std::string>()).string();
    e.type = parse_ctype(j.at("type").get<std::string>());
    e.discrete = j.value("engines", "all") == "all";
    e.oracle = j.value("oracle", "");
    if (!e.oracle.empty() && !e.discrete) throw CertError(e.name + ": an oracle requires a discrete entry");
    e.program = parse(read_file(e.path));
    auto got = check_program(e.program);
    if (!type_equal(got, e.type)) {
      throw CertError(e.name + ": documented type " + to_string(e.type) + " but program has " + to_string(got));
    }
    for (const auto& a : j.value("args", nlohmann::json::array())) {
      e.arg_text.push_back(a.get<std::string>());
      e.args.push_back(eval_value(parse_value(e.arg_text.back())));
    }
    check_program(e.applied());
    out.push_back(std::move(e));
  }
  return out;
}

const CorpusEntry& find_entry(const std::vector<CorpusEntry>& corpus, const std::string& name) {
  for (const auto& e : corpus) {
    if (e.name == name) return e;
  }
  throw CertError("no corpus entry named " + name);
}

}  // namespace cert
