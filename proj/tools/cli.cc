#include "cli.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conspec/error.h"
#include "conspec/export.h"
#include "conspec/model.h"
#include "conspec/parser.h"
#include "conspec/realizer.h"
#include "conspec/transfer.h"
#include "conspec/treeline.h"
#include "conspec/verify.h"

namespace conspec {

namespace {

using nlohmann::ordered_json;

struct Flags {
  std::string model;
  std::string pair;
  std::string corpus;
  std::vector<std::string> args;
  bool all = false;
  bool json = false;
  bool trace = false;
  bool dot = false;
  bool notation = false;
  std::optional<int> beam;
  std::optional<double> tau;
  int top = 3;
};

std::string Score(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", s);
  return buf;
}

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// The positional words as one input, or one input per stdin line.
std::vector<std::string> Inputs(const Flags &f, std::istream &in) {
  if (!f.args.empty() && !(f.args.size() == 1 && f.args[0] == "-")) {
    std::string joined;
    for (const std::string &a : f.args) {
      if (!joined.empty()) joined += ' ';
      joined += a;
    }
    return {joined};
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

// Tree-line networks from a file argument or stdin, one per line.
std::vector<std::string> NetworkLines(const Flags &f, std::istream &in) {
  if (f.args.size() == 1 && f.args[0] != "-") {
    std::ifstream file(f.args[0]);
    if (file) {
      std::vector<std::string> lines;
      std::string line;
      while (std::getline(file, line)) {
        line = Trim(line);
        if (!line.empty() && line[0] != '#') lines.push_back(line);
      }
      return lines;
    }
  }
  return Inputs(f, in);
}

Model ResolveModel(const Flags &f) {
  std::string path = f.model;
  if (path.empty()) {
    if (const char *env = std::getenv("CONSPEC_MODEL_PATH")) path = env;
  }
  Model m = path.empty() ? Model() : LoadModel(path);
  if (f.beam) m.set_beam(*f.beam);
  if (f.tau) m.set_tau(*f.tau);
  return m;
}

void PrintTrace(const std::vector<std::string> &trace, std::ostream &out) {
  for (const std::string &t : trace) out << "  " << t << "\n";
}

int RunParse(const Flags &f, std::istream &in, std::ostream &out) {
  Model model = ResolveModel(f);
  for (const std::string &text : Inputs(f, in)) {
    std::vector<ParseResult> results = ParseText(model, text);
    size_t n = f.all ? results.size() : 1;
    if (f.json) {
      ordered_json arr = ordered_json::array();
      for (size_t i = 0; i < n; ++i) {
        ordered_json j;
        j["treeline"] = PrintNetwork(results[i].network);
        j["score"] = results[i].score;
        j["network"] = ordered_json::parse(ToJson(results[i].network));
        if (f.trace) j["trace"] = results[i].trace;
        arr.push_back(j);
      }
      out << (f.all ? arr.dump(2) : arr[0].dump(2)) << "\n";
      continue;
    }
    for (size_t i = 0; i < n; ++i) {
      if (f.all) out << Score(results[i].score) << "\t";
      out << PrintNetwork(results[i].network) << "\n";
      if (f.trace) PrintTrace(results[i].trace, out);
    }
  }
  return kExitOk;
}

int RunRealize(const Flags &f, std::istream &in, std::ostream &out) {
  Model model = ResolveModel(f);
  for (const std::string &line : Inputs(f, in)) {
    std::vector<RealizeResult> results = Realize(model, ParseNetwork(line));
    size_t n = f.all ? results.size() : 1;
    if (f.json) {
      ordered_json arr = ordered_json::array();
      for (size_t i = 0; i < n; ++i) {
        ordered_json j;
        j["text"] = results[i].text;
        j["score"] = results[i].score;
        if (f.trace) {
          j["states"] = results[i].states;
          j["trace"] = results[i].trace;
        }
        arr.push_back(j);
      }
      out << (f.all ? arr.dump(2) : arr[0].dump(2)) << "\n";
      continue;
    }
    for (size_t i = 0; i < n; ++i) {
      if (f.all) out << Score(results[i].score) << "\t";
      out << results[i].text << "\n";
      if (f.trace) {
        for (const std::string &s : results[i].states) out << "  = " << s << "\n";
        PrintTrace(results[i].trace, out);
      }
    }
  }
  return kExitOk;
}

int RunTranslate(const Flags &f, std::istream &in, std::ostream &out) {
  if (f.pair.empty()) {
    throw CLI::RequiredError("--pair");
  }
  LanguagePair pair = LoadPair(f.pair);
  if (f.beam) {
    pair.source.set_beam(*f.beam);
    pair.receptor.set_beam(*f.beam);
  }
  if (f.tau) {
    pair.source.set_tau(*f.tau);
    pair.receptor.set_tau(*f.tau);
  }
  for (const std::string &text : Inputs(f, in)) {
    std::vector<TranslateResult> results = Translate(pair, text);
    size_t n = f.all ? results.size() : 1;
    if (f.json) {
      ordered_json arr = ordered_json::array();
      for (size_t i = 0; i < n; ++i) {
        ordered_json j;
        j["text"] = results[i].text;
        j["score"] = results[i].score;
        if (f.trace) j["trace"] = results[i].trace;
        arr.push_back(j);
      }
      out << (f.all ? arr.dump(2) : arr[0].dump(2)) << "\n";
      continue;
    }
    for (size_t i = 0; i < n; ++i) {
      if (f.all) out << Score(results[i].score) << "\t";
      out << results[i].text << "\n";
      if (f.trace) PrintTrace(results[i].trace, out);
    }
  }
  return kExitOk;
}

int RunCanon(const Flags &f, std::istream &in, std::ostream &out) {
  for (const std::string &line : NetworkLines(f, in)) {
    Network net = Canonicalize(ParseNetwork(line));
    if (f.dot) {
      out << ToDot(net);
    } else if (f.json) {
      out << ToJson(net) << "\n";
    } else {
      out << PrintNetwork(net) << "\n";
    }
  }
  return kExitOk;
}

int RunExport(const Flags &f, std::istream &in, std::ostream &out) {
  if (!f.dot && !f.json) {
    throw CLI::ValidationError("export", "one of --dot or --json is required");
  }
  return RunCanon(f, in, out);
}

std::vector<CorpusEntry> LoadCorpus(const std::string &path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error &e) {
    throw Error(ErrorKind::kParse, "cannot open corpus", e.location(), "check");
  }
  return ParseCorpus(text, path);
}

int RunCheck(const Flags &f, std::ostream &out) {
  if (f.corpus.empty()) throw CLI::RequiredError("--corpus");
  std::vector<CorpusEntry> corpus = LoadCorpus(f.corpus);
  CheckReport report;
  if (f.notation) {
    report = CheckNotation(corpus);
  } else {
    Model model = ResolveModel(f);
    report = CheckCorpus(model, corpus, f.top);
  }
  out << report.Table();
  return report.ok() ? kExitOk : kExitFailure;
}

int RunLint(const Flags &f, std::ostream &out) {
  std::string path = f.model;
  if (path.empty()) {
    if (const char *env = std::getenv("CONSPEC_MODEL_PATH")) path = env;
  }
  if (path.empty()) throw CLI::RequiredError("--model");
  std::optional<std::vector<CorpusEntry>> corpus;
  if (!f.corpus.empty()) corpus = LoadCorpus(f.corpus);
  std::vector<LintMessage> messages =
      LintModel(ReadFile(path), path, corpus ? &*corpus : nullptr);
  int warnings = 0;
  for (const LintMessage &m : messages) {
    out << m.ToString() << "\n";
    if (m.severity == LintMessage::Severity::kWarning) ++warnings;
  }
  out << warnings << " warning(s)\n";
  return warnings == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::istream &in,
           std::ostream &out, std::ostream &err) {
  CLI::App app{"conspec: concept-network parsing, realization and transfer"};
  app.require_subcommand(1);
  Flags f;

  auto engine_flags = [&](CLI::App *sub) {
    sub->add_option("--model", f.model,
                    "model file (default: $CONSPEC_MODEL_PATH)");
    sub->add_flag("--all", f.all, "print every ranked candidate with scores");
    sub->add_flag("--json", f.json, "JSON output");
    sub->add_flag("--trace", f.trace, "print derivation traces");
    sub->add_option("--beam", f.beam, "hypotheses kept per step")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tau", f.tau, "minimum rule match score")
        ->check(CLI::Range(0.0, 1.0));
  };

  CLI::App *parse = app.add_subcommand("parse", "parse text into a network");
  engine_flags(parse);
  parse->add_option("text", f.args, "text to parse (default: stdin lines)");

  CLI::App *realize =
      app.add_subcommand("realize", "realize a tree-line network as text");
  engine_flags(realize);
  realize->add_option("network", f.args, "tree-line (default: stdin lines)");

  CLI::App *translate =
      app.add_subcommand("translate", "parse, transfer and realize");
  engine_flags(translate);
  translate->add_option("--pair", f.pair, "language pair file")->required();
  translate->add_option("text", f.args, "text (default: stdin lines)");

  CLI::App *canon = app.add_subcommand("canon", "print canonical tree-line");
  canon->add_option("file", f.args, "file of networks or - for stdin");
  canon->add_flag("--dot", f.dot, "emit Graphviz DOT instead");
  canon->add_flag("--json", f.json, "emit the JSON graph export instead");

  CLI::App *check = app.add_subcommand("check", "corpus regression");
  check->add_option("--model", f.model, "model file");
  check->add_option("--corpus", f.corpus, "corpus file")->required();
  check->add_flag("--notation", f.notation,
                  "only round-trip the tree-line column");
  check->add_option("--top", f.top, "candidates searched per direction")
      ->check(CLI::PositiveNumber);
  check->add_option("--beam", f.beam, "hypotheses kept per step")
      ->check(CLI::PositiveNumber);
  check->add_option("--tau", f.tau, "minimum rule match score")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App *lint = app.add_subcommand("lint", "report model problems");
  lint->add_option("--model", f.model, "model file");
  lint->add_option("--corpus", f.corpus, "corpus used to find unused rules");

  CLI::App *exp = app.add_subcommand("export", "export networks as DOT/JSON");
  exp->add_option("file", f.args, "file of networks or - for stdin");
  exp->add_flag("--dot", f.dot, "Graphviz DOT");
  exp->add_flag("--json", f.json, "JSON graph export");

  try {
    app.parse(argc, argv);
    if (parse->parsed()) return RunParse(f, in, out);
    if (realize->parsed()) return RunRealize(f, in, out);
    if (translate->parsed()) return RunTranslate(f, in, out);
    if (canon->parsed()) return RunCanon(f, in, out);
    if (check->parsed()) return RunCheck(f, out);
    if (lint->parsed()) return RunLint(f, out);
    if (exp->parsed()) return RunExport(f, in, out);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error &e) {
    err << "conspec: " << e.what() << "\n";
    return e.kind() == ErrorKind::kModelLoad ? kExitModelLoad : kExitFailure;
  }
  return kExitUsage;
}

}  // namespace conspec
