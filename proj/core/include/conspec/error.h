#ifndef CONSPEC_ERROR_H_
#define CONSPEC_ERROR_H_

#include <stdexcept>
#include <string>

namespace conspec {

enum class ErrorKind {
  kParse,
  kMalformedNetwork,
  kModelLoad,
  kUntranslatableConcept,
  kUnrealizableFragment,
  kUnparseableText,
};

const char *ErrorKindName(ErrorKind kind);

// Position inside a text source. Line and column are 1-based; zero means
// unknown.
struct Location {
  std::string file;
  int line = 0;
  int column = 0;

  std::string ToString() const;
};

// All engine failures are reported as conspec::Error. The stage names the
// pipeline step that failed ("parse", "transfer", "realize", "load", ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, Location location = {},
        std::string stage = {});

  ErrorKind kind() const { return kind_; }
  const std::string &message() const { return message_; }
  const Location &location() const { return location_; }
  const std::string &stage() const { return stage_; }

  // Returns a copy tagged with the given stage.
  Error WithStage(std::string stage) const;
  // Returns a copy with the file/line filled in where unknown.
  Error WithLocation(const Location &outer) const;

 private:
  static std::string Render(ErrorKind kind, const std::string &message,
                            const Location &location,
                            const std::string &stage);

  ErrorKind kind_;
  std::string message_;
  Location location_;
  std::string stage_;
};

}  // namespace conspec

#endif  // CONSPEC_ERROR_H_
