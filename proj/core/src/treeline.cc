#include "conspec/treeline.h"

#include <cctype>
#include <map>

#include "conspec/error.h"

namespace conspec {

namespace {

enum class Tok {
  kGt,
  kUp,
  kDown,
  kLBracket,
  kRBracket,
  kLParen,
  kRParen,
  kComma,
  kCaret,
  kWord,
  kStemless,
  kLiteral,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  int sense = 1;
  int column = 0;  // 1-based within the statement line
};

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::string CollapseSpaces(std::string_view in) {
  std::string out;
  bool pending = false;
  for (char c : in) {
    if (IsSpace(c)) {
      pending = !out.empty();
    } else {
      if (pending) out += ' ';
      pending = false;
      out += c;
    }
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  size_t b = 0;
  while (b < s.size() && IsSpace(s[b])) ++b;
  size_t e = s.size();
  while (e > b && IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

class Lexer {
 public:
  Lexer(std::string_view text, int line, int column_base,
        std::vector<std::string> *notes)
      : text_(text), line_(line), base_(column_base), notes_(notes) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < text_.size() && IsSpace(text_[pos_])) ++pos_;
      if (pos_ >= text_.size()) break;
      int col = Column(pos_);
      char c = text_[pos_];
      if (c == '>') {
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          out.push_back({Tok::kUp, ">>", 1, col});
          pos_ += 2;
        } else {
          out.push_back({Tok::kGt, ">", 1, col});
          ++pos_;
        }
      } else if (c == '<') {
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '<') {
          out.push_back({Tok::kDown, "<<", 1, col});
          pos_ += 2;
        } else {
          Fail(col, "unexpected '<' (anchors are written '<<')");
        }
      } else if (c == '[') {
        out.push_back({Tok::kLBracket, "[", 1, col});
        ++pos_;
      } else if (c == ']') {
        out.push_back({Tok::kRBracket, "]", 1, col});
        ++pos_;
      } else if (c == '(') {
        out.push_back({Tok::kLParen, "(", 1, col});
        ++pos_;
      } else if (c == ')') {
        out.push_back({Tok::kRParen, ")", 1, col});
        ++pos_;
      } else if (c == ',') {
        out.push_back({Tok::kComma, ",", 1, col});
        ++pos_;
      } else if (c == '^') {
        out.push_back({Tok::kCaret, "^", 1, col});
        ++pos_;
      } else if (c == '{') {
        size_t close = text_.find('}', pos_);
        if (close == std::string_view::npos) Fail(col, "unbalanced '{'");
        std::string label = CollapseSpaces(text_.substr(pos_ + 1, close - pos_ - 1));
        if (!IsValidLabel(label)) {
          Fail(col, "invalid stemless label '{" + label + "}'");
        }
        pos_ = close + 1;
        Token t{Tok::kStemless, label, ReadSense(), col};
        out.push_back(std::move(t));
      } else if (c == '\'' || c == '"') {
        size_t close = text_.find(c, pos_ + 1);
        if (close == std::string_view::npos) Fail(col, "unterminated literal");
        std::string lit(text_.substr(pos_ + 1, close - pos_ - 1));
        if (lit.empty()) Fail(col, "empty literal");
        out.push_back({Tok::kLiteral, std::move(lit), 1, col});
        pos_ = close + 1;
      } else if (c == '}') {
        Fail(col, "unbalanced '}'");
      } else if (c == '=' || c == '#') {
        Fail(col, std::string("unexpected '") + c + "'");
      } else {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               std::string_view("<>[](){},='\"^#").find(text_[pos_]) ==
                   std::string_view::npos) {
          ++pos_;
        }
        std::string label = CollapseSpaces(text_.substr(start, pos_ - start));
        // "either...or" and "either or" name the same connective.
        size_t dots = label.find("...");
        if (dots != std::string::npos) {
          std::string before = label;
          label = CollapseSpaces(label.replace(dots, 3, " "));
          if (notes_ != nullptr) {
            notes_->push_back(Where(col) + ": normalized label '" + before +
                              "' to '" + label + "'");
          }
        }
        if (!IsValidLabel(label)) Fail(col, "invalid label '" + label + "'");
        out.push_back({Tok::kWord, label, ReadSense(), col});
      }
    }
    out.push_back({Tok::kEnd, "", 1, Column(text_.size())});
    return out;
  }

 private:
  int ReadSense() {
    if (pos_ >= text_.size() || text_[pos_] != '#') return 1;
    size_t start = pos_ + 1;
    size_t end = start;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    if (end == start) Fail(Column(pos_), "expected sense number after '#'");
    int sense = std::stoi(std::string(text_.substr(start, end - start)));
    if (sense < 1) Fail(Column(pos_), "sense numbers start at 1");
    pos_ = end;
    return sense;
  }

  int Column(size_t pos) const { return base_ + static_cast<int>(pos) + 1; }

  std::string Where(int col) const {
    return Location{"", line_, col}.ToString();
  }

  [[noreturn]] void Fail(int col, const std::string &msg) const {
    throw Error(ErrorKind::kParse, msg, Location{"", line_, col});
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_;
  int base_;
  std::vector<std::string> *notes_;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, int line)
      : tokens_(std::move(tokens)), line_(line) {}

  Network ParseWholeNetwork() {
    Network net;
    net.roots = ParseChains();
    Expect(Tok::kEnd, "end of expression");
    return net;
  }

  std::vector<RulePart> ParseRhs() {
    Expect(Tok::kLBracket, "'[' opening the rule's right-hand side");
    std::vector<RulePart> parts;
    while (true) {
      RulePart part;
      if (Peek().kind == Tok::kLiteral) {
        part.literal = Next().text;
      } else {
        part.pattern.roots.push_back(ParseChain());
      }
      parts.push_back(std::move(part));
      if (Peek().kind == Tok::kComma) {
        Next();
        continue;
      }
      break;
    }
    Expect(Tok::kRBracket, "']' closing the rule's right-hand side");
    Expect(Tok::kEnd, "end of rule");
    return parts;
  }

 private:
  const Token &Peek() const { return tokens_[pos_]; }
  const Token &Next() { return tokens_[pos_++]; }

  void Expect(Tok kind, const std::string &what) {
    if (Peek().kind != kind) {
      Fail(Peek(), "expected " + what + Found(Peek()));
    }
    Next();
  }

  static std::string Found(const Token &t) {
    if (t.kind == Tok::kEnd) return ", found end of input";
    return ", found '" + t.text + "'";
  }

  [[noreturn]] void Fail(const Token &at, const std::string &msg) const {
    throw Error(ErrorKind::kParse, msg, Location{"", line_, at.column});
  }

  std::vector<Node> ParseChains() {
    std::vector<Node> roots;
    roots.push_back(ParseChain());
    while (Peek().kind == Tok::kComma) {
      Next();
      roots.push_back(ParseChain());
    }
    return roots;
  }

  Node ParseChain() {
    Node root = ParseItem();
    Node *head = &root;
    while (Peek().kind == Tok::kGt) {
      Next();
      if (Peek().kind == Tok::kLBracket) {
        const Token &open = Next();
        if (Peek().kind == Tok::kRBracket) Fail(open, "empty group");
        head->Specify(ParseChain());
        while (Peek().kind == Tok::kComma) {
          Next();
          head->Specify(ParseChain());
        }
        Expect(Tok::kRBracket, "',' or ']'");
      } else {
        head = &head->Specify(ParseItem());
      }
    }
    return root;
  }

  Node ParseItem() {
    const Token &first = Peek();
    int up = 0;
    int down = 0;
    while (Peek().kind == Tok::kUp || Peek().kind == Tok::kDown) {
      (Next().kind == Tok::kUp ? up : down)++;
    }
    if (up > 0 && down > 0) Fail(first, "mixed '>>' and '<<' on one item");
    bool head = false;
    if (Peek().kind == Tok::kCaret) {
      if (heads_.empty()) Fail(Peek(), "head marker '^' outside parentheses");
      if (heads_.back()) Fail(Peek(), "second head marker in one capsule");
      heads_.back() = true;
      head = true;
      Next();
    }
    if (up > 0 || down > 0) {
      int depth = static_cast<int>(heads_.size());
      if (depth == 0) Fail(first, "anchor at top level (outside any parentheses)");
      if (up > depth) {
        Fail(first, "anchor crosses " + std::to_string(up) +
                        " boundaries but is nested in " + std::to_string(depth));
      }
      if (down > 1) Fail(first, "'<<' deeper than one boundary is unsupported");
    }

    const Token &t = Peek();
    Node node;
    switch (t.kind) {
      case Tok::kWord:
        node = Node::Of(Concept::Stem(t.text, t.sense));
        Next();
        break;
      case Tok::kStemless:
        node = Node::Of(Concept::Stemless(t.text, t.sense));
        Next();
        break;
      case Tok::kLParen: {
        Next();
        if (Peek().kind == Tok::kRParen) Fail(t, "empty parentheses");
        heads_.push_back(false);
        std::vector<Node> body = ParseChains();
        heads_.pop_back();
        Expect(Tok::kRParen, "')'");
        node = Node::Wrap(std::move(body));
        break;
      }
      case Tok::kLBracket:
        Fail(t, "a '[' group must follow '>'");
      case Tok::kLiteral:
        Fail(t, "surface literal outside a rule's right-hand side");
      case Tok::kGt:
        Fail(t, "empty item before '>'");
      default:
        Fail(t, "expected a concept" + Found(t));
    }
    if (up > 0) node.anchor = Anchor{AnchorDirection::kUp, up};
    if (down > 0) node.anchor = Anchor{AnchorDirection::kDown, down};
    node.head = head;
    return node;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int line_;
  // One entry per open capsule: whether it already has an explicit head.
  std::vector<bool> heads_;
};

Network ParseNetworkAt(std::string_view text, int line, int column_base,
                       std::vector<std::string> *notes) {
  Lexer lexer(text, line, column_base, notes);
  Parser parser(lexer.Run(), line);
  return parser.ParseWholeNetwork();
}

std::vector<RulePart> ParseRhsAt(std::string_view text, int line,
                                 int column_base,
                                 std::vector<std::string> *notes) {
  Lexer lexer(text, line, column_base, notes);
  Parser parser(lexer.Run(), line);
  return parser.ParseRhs();
}

void AppendNode(const Node &node, std::string *out) {
  if (node.anchor) {
    const char *mark = node.anchor->direction == AnchorDirection::kUp ? ">>"
                                                                      : "<<";
    for (int i = 0; i < node.anchor->depth; ++i) *out += mark;
  }
  if (node.head) *out += '^';
  if (node.is_concept()) {
    *out += node.as_concept().ToString();
  } else {
    *out += '(';
    const auto &roots = node.capsule().roots;
    for (size_t i = 0; i < roots.size(); ++i) {
      if (i > 0) *out += ", ";
      AppendNode(roots[i], out);
    }
    *out += ')';
  }
  if (node.specifiers.size() == 1) {
    *out += " > ";
    AppendNode(node.specifiers.front(), out);
  } else if (node.specifiers.size() > 1) {
    *out += " > [";
    for (size_t i = 0; i < node.specifiers.size(); ++i) {
      if (i > 0) *out += ", ";
      AppendNode(node.specifiers[i], out);
    }
    *out += ']';
  }
}

// Strips a `#` comment: one at line start or after whitespace, outside
// quotes. A `#` glued to a word is a sense suffix.
std::string_view StripComment(std::string_view line) {
  char quote = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '#' && (i == 0 || IsSpace(line[i - 1]))) {
      return line.substr(0, i);
    }
  }
  return line;
}

struct TopOperator {
  std::string op;
  size_t pos;
};

// Finds `=`-family and `->` operators outside brackets, braces and quotes.
std::vector<TopOperator> FindTopOperators(std::string_view s) {
  std::vector<TopOperator> ops;
  int depth = 0;
  char quote = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '[' || c == '(' || c == '{') {
      ++depth;
    } else if (c == ']' || c == ')' || c == '}') {
      --depth;
    } else if (depth == 0 && c == '=') {
      bool lt = i > 0 && s[i - 1] == '<';
      bool gt = i + 1 < s.size() && s[i + 1] == '>';
      bool other_before = i > 0 && (s[i - 1] == '=' || s[i - 1] == '!' ||
                                    s[i - 1] == '>' || s[i - 1] == ':');
      bool other_after = i + 1 < s.size() && s[i + 1] == '=';
      if (lt && gt) {
        ops.push_back({"<=>", i - 1});
        ++i;
      } else if (gt && !other_before) {
        ops.push_back({"=>", i});
        ++i;
      } else if (lt) {
        ops.push_back({"<=", i - 1});
      } else if (other_before || other_after) {
        ops.push_back({std::string(1, s[i - 1 + (other_after ? 1 : 0)]) + "=", i});
        if (other_after) ++i;
      } else {
        ops.push_back({"=", i});
      }
    } else if (depth == 0 && c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      ops.push_back({"->", i});
      ++i;
    }
  }
  return ops;
}

bool StartsWithWord(std::string_view s, std::string_view word) {
  return s.size() > word.size() && s.substr(0, word.size()) == word &&
         IsSpace(s[word.size()]);
}

Concept ParseSingleConcept(std::string_view text, int line, int column_base,
                           const std::string &what) {
  Network net = ParseNetworkAt(text, line, column_base, nullptr);
  if (net.roots.size() != 1 || !net.roots[0].is_concept() ||
      !net.roots[0].specifiers.empty() || net.roots[0].anchor) {
    throw Error(ErrorKind::kParse, what + " must be a single concept",
                Location{"", line, column_base + 1});
  }
  return net.roots[0].as_concept();
}

std::vector<std::string> ParseLiterals(std::string_view text, int line,
                                       int column_base) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    while (pos < text.size() && IsSpace(text[pos])) ++pos;
    if (pos >= text.size()) break;
    char q = text[pos];
    if (q != '\'' && q != '"') {
      throw Error(ErrorKind::kParse, "expected a quoted surface form",
                  Location{"", line, column_base + static_cast<int>(pos) + 1});
    }
    size_t close = text.find(q, pos + 1);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "unterminated literal",
                  Location{"", line, column_base + static_cast<int>(pos) + 1});
    }
    out.emplace_back(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return out;
}

StatementBody ParseStatement(std::string_view raw, int line,
                             std::vector<std::string> *notes) {
  std::string_view s = Trim(raw);
  int base = static_cast<int>(s.data() - raw.data());
  auto offset = [&](std::string_view sub) {
    return base + static_cast<int>(sub.data() - s.data());
  };

  if (StartsWithWord(s, "declare")) {
    std::string_view rest = Trim(s.substr(7));
    size_t q = rest.find_first_of("'\"");
    std::string_view label_text = Trim(rest.substr(0, q));
    DeclareStmt d;
    d.label = ParseSingleConcept(label_text, line, offset(label_text),
                                 "declared label");
    if (!d.label.stemless) {
      throw Error(ErrorKind::kParse, "only stemless labels are declared",
                  Location{"", line, offset(label_text) + 1});
    }
    if (q != std::string_view::npos) {
      auto lits = ParseLiterals(rest.substr(q), line, offset(rest.substr(q)));
      if (lits.size() != 1) {
        throw Error(ErrorKind::kParse, "expected one quoted description",
                    Location{"", line, offset(rest) + 1});
      }
      d.description = lits[0];
    }
    return d;
  }
  if (StartsWithWord(s, "set")) {
    std::string_view rest = Trim(s.substr(3));
    size_t sp = rest.find_first_of(" \t");
    if (sp == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "expected 'set <key> <value>'",
                  Location{"", line, base + 1});
    }
    return PragmaStmt{std::string(rest.substr(0, sp)),
                      std::string(Trim(rest.substr(sp)))};
  }
  if (StartsWithWord(s, "map")) {
    std::string_view rest = Trim(s.substr(3));
    size_t arrow = rest.find("->");
    if (arrow == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "expected 'map <source> -> <receptor>'",
                  Location{"", line, base + 1});
    }
    std::string_view lhs = Trim(rest.substr(0, arrow));
    std::string_view rhs = Trim(rest.substr(arrow + 2));
    MapStmt m;
    if (lhs != "*") m.src = ParseSingleConcept(lhs, line, offset(lhs), "map source");
    if (rhs != "*") m.dst = ParseSingleConcept(rhs, line, offset(rhs), "map target");
    if (m.src.has_value() != m.dst.has_value()) {
      throw Error(ErrorKind::kParse, "'*' must appear on both sides of a map",
                  Location{"", line, base + 1});
    }
    return m;
  }
  if (StartsWithWord(s, "surface")) {
    std::string_view rest = Trim(s.substr(7));
    size_t q = rest.find_first_of("'\"");
    if (q == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "expected quoted surface forms",
                  Location{"", line, base + 1});
    }
    std::string_view concept_text = Trim(rest.substr(0, q));
    SurfaceStmt stmt;
    stmt.term = ParseSingleConcept(concept_text, line, offset(concept_text),
                                      "surface concept");
    stmt.forms = ParseLiterals(rest.substr(q), line, offset(rest.substr(q)));
    return stmt;
  }
  for (std::string_view role : {"source:", "receptor:"}) {
    if (s.substr(0, role.size()) == role) {
      std::string path(Trim(s.substr(role.size())));
      if (path.empty()) {
        throw Error(ErrorKind::kParse, "missing path",
                    Location{"", line, base + 1});
      }
      return IncludeStmt{std::string(role.substr(0, role.size() - 1)), path};
    }
  }

  std::vector<TopOperator> ops = FindTopOperators(s);
  for (const TopOperator &op : ops) {
    if (op.op != "=" && op.op != "<=>" && op.op != "=>") {
      throw Error(ErrorKind::kParse, "unknown operator '" + op.op + "'",
                  Location{"", line, base + static_cast<int>(op.pos) + 1});
    }
  }
  if (ops.size() > 1) {
    throw Error(ErrorKind::kParse,
                "mixed statement syntax: '" + ops[0].op + "' and '" +
                    ops[1].op + "' on one line",
                Location{"", line, base + static_cast<int>(ops[1].pos) + 1});
  }
  if (ops.empty()) {
    return NetworkStmt{ParseNetworkAt(s, line, base, notes)};
  }

  const TopOperator &op = ops[0];
  std::string_view lhs = Trim(s.substr(0, op.pos));
  std::string_view rhs = Trim(s.substr(op.pos + op.op.size()));
  if (lhs.empty() || rhs.empty()) {
    throw Error(ErrorKind::kParse, "'" + op.op + "' needs both sides",
                Location{"", line, base + static_cast<int>(op.pos) + 1});
  }
  if (op.op == "=") {
    DefinitionStmt d;
    d.name = ParseSingleConcept(lhs, line, offset(lhs), "definition name");
    d.body = ParseNetworkAt(rhs, line, offset(rhs), notes);
    return d;
  }
  if (op.op == "<=>") {
    RuleStmt r;
    r.lhs = ParseNetworkAt(lhs, line, offset(lhs), notes);
    r.rhs = ParseRhsAt(rhs, line, offset(rhs), notes);
    r.text = std::string(s);
    return r;
  }
  TransferRuleStmt t;
  t.src = ParseNetworkAt(lhs, line, offset(lhs), notes);
  t.dst = ParseNetworkAt(rhs, line, offset(rhs), notes);
  t.text = std::string(s);
  return t;
}

}  // namespace

Network ParseNetwork(std::string_view text, std::vector<std::string> *notes) {
  return ParseNetworkAt(text, 0, 0, notes);
}

Concept ParseConcept(std::string_view text) {
  return ParseSingleConcept(Trim(text), 0, 0, "concept");
}

std::string PrintNode(const Node &node) {
  std::string out;
  AppendNode(node, &out);
  return out;
}

std::string PrintNetwork(const Network &network) {
  Network canonical = CanonicalizeUnchecked(network);
  std::string out;
  for (size_t i = 0; i < canonical.roots.size(); ++i) {
    if (i > 0) out += ", ";
    AppendNode(canonical.roots[i], &out);
  }
  return out;
}

std::string QuoteLiteral(const std::string &literal) {
  if (literal.find('\'') != std::string::npos) return "\"" + literal + "\"";
  return "'" + literal + "'";
}

TreelineDocument ParseDocument(std::string_view text, std::string_view file,
                               bool allow_duplicates) {
  TreelineDocument doc;
  std::map<Concept, int> defined;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    std::string_view body = StripComment(line);
    if (Trim(body).empty()) {
      if (eol == text.size()) break;
      continue;
    }
    Statement stmt;
    stmt.line = line_no;
    try {
      std::vector<std::string> notes;
      stmt.body = ParseStatement(body, line_no, &notes);
      for (std::string &n : notes) {
        doc.notes.push_back(file.empty() ? n : std::string(file) + ":" + n);
      }
    } catch (const Error &e) {
      throw e.WithLocation(Location{std::string(file), line_no, 0});
    }
    if (auto *def = std::get_if<DefinitionStmt>(&stmt.body)) {
      auto [it, inserted] = defined.emplace(def->name, line_no);
      if (!inserted && !allow_duplicates) {
        throw Error(ErrorKind::kParse,
                    "duplicate definition of '" + def->name.ToString() +
                        "' at lines " + std::to_string(it->second) + " and " +
                        std::to_string(line_no),
                    Location{std::string(file), line_no, 0});
      }
    }
    doc.statements.push_back(std::move(stmt));
    if (eol == text.size()) break;
  }
  return doc;
}

std::vector<CorpusEntry> ParseCorpus(std::string_view text,
                                     std::string_view file) {
  std::vector<CorpusEntry> out;
  int line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "expected 'surface<TAB>tree-line'",
                  Location{std::string(file), line_no, 0});
    }
    out.push_back({line_no, CollapseSpaces(line.substr(0, tab)),
                   std::string(Trim(line.substr(tab + 1)))});
  }
  return out;
}

}  // namespace conspec
