#include "conspec/error.h"

namespace conspec {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kMalformedNetwork: return "malformed network";
    case ErrorKind::kModelLoad: return "model load error";
    case ErrorKind::kUntranslatableConcept: return "untranslatable concept";
    case ErrorKind::kUnrealizableFragment: return "unrealizable fragment";
    case ErrorKind::kUnparseableText: return "unparseable text";
  }
  return "error";
}

std::string Location::ToString() const {
  std::string out = file;
  if (line > 0) {
    if (!out.empty()) out += ":";
    out += std::to_string(line);
    if (column > 0) out += ":" + std::to_string(column);
  } else if (column > 0) {
    if (!out.empty()) out += ":";
    out += "col " + std::to_string(column);
  }
  return out;
}

Error::Error(ErrorKind kind, std::string message, Location location,
             std::string stage)
    : std::runtime_error(Render(kind, message, location, stage)),
      kind_(kind),
      message_(std::move(message)),
      location_(std::move(location)),
      stage_(std::move(stage)) {}

Error Error::WithStage(std::string stage) const {
  return Error(kind_, message_, location_, std::move(stage));
}

Error Error::WithLocation(const Location &outer) const {
  Location merged = location_;
  if (merged.file.empty()) merged.file = outer.file;
  if (merged.line == 0) merged.line = outer.line;
  return Error(kind_, message_, merged, stage_);
}

std::string Error::Render(ErrorKind kind, const std::string &message,
                          const Location &location, const std::string &stage) {
  std::string out;
  if (!stage.empty()) out += "[" + stage + "] ";
  std::string where = location.ToString();
  if (!where.empty()) out += where + ": ";
  out += ErrorKindName(kind);
  out += ": ";
  out += message;
  return out;
}

}  // namespace conspec
