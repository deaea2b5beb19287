#include "smash/sql.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "smash/error.hpp"

namespace smash::sql {
namespace {

enum class Tok { Ident, Number, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '$')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') ++j;
      if (j >= src.size()) throw ParseError("unterminated quoted identifier", line, col);
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '\'') {
      std::string s;
      std::size_t j = i + 1;
      for (;;) {
        if (j >= src.size()) throw ParseError("unterminated string literal", line, col);
        if (src[j] == '\'') {
          if (j + 1 < src.size() && src[j + 1] == '\'') {
            s += '\'';
            j += 2;
            continue;
          }
          break;
        }
        s += src[j++];
      }
      t.kind = Tok::String;
      t.text = std::move(s);
      advance(j + 1 - i);
    } else {
      static const char* two[] = {"<=", ">=", "!=", "<>", "||"};
      t.kind = Tok::Symbol;
      for (const char* sym : two) {
        if (src.substr(i, 2) == sym) t.text = sym;
      }
      if (t.text.empty()) {
        static const std::string_view one = "(),.;*=<>+-/%";
        if (one.find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const std::vector<std::string>& reserved() {
  static const std::vector<std::string> words = {
      "SELECT", "FROM",  "WHERE",  "AND",    "OR",     "NOT",   "AS",     "GROUP",  "BY",    "EXISTS", "CREATE",
      "VIEW",   "TABLE", "DROP",   "UNLOGGED", "IN",   "LIKE",  "BETWEEN", "JOIN",  "LEFT",  "RIGHT",  "INNER",
      "OUTER",  "FULL",  "CROSS",  "ON",     "HAVING", "ORDER", "LIMIT",  "UNION",  "IS",    "NULL",   "CAST",
      "DISTINCT", "NATURAL", "USING", "CASE", "WITH",  "EXCEPT", "INTERSECT"};
  return words;
}

bool is_reserved(const std::string& word) {
  const auto u = upper(word);
  const auto& r = reserved();
  return std::find(r.begin(), r.end(), u) != r.end();
}

std::optional<AggFn> aggregate_fn(const std::string& word) {
  const auto u = upper(word);
  if (u == "MIN") return AggFn::Min;
  if (u == "MAX") return AggFn::Max;
  if (u == "COUNT") return AggFn::Count;
  if (u == "SUM") return AggFn::Sum;
  if (u == "AVG") return AggFn::Avg;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Statement statement() {
    Statement st;
    if (keyword("CREATE")) {
      if (keyword("UNLOGGED")) st.unlogged = true;
      if (keyword("VIEW")) {
        if (st.unlogged) fail("UNLOGGED applies to tables only");
        st.kind = Statement::Kind::CreateView;
      } else {
        expect_keyword("TABLE");
        st.kind = Statement::Kind::CreateTable;
      }
      st.name = identifier("object name");
      expect_keyword("AS");
      st.select = select();
    } else if (keyword("DROP")) {
      if (keyword("VIEW")) {
        st.kind = Statement::Kind::DropView;
      } else {
        expect_keyword("TABLE");
        st.kind = Statement::Kind::DropTable;
      }
      if (peek_keyword("IF")) {
        advance();
        expect_keyword("EXISTS");
      }
      st.name = identifier("object name");
    } else {
      st.select = select();
    }
    (void)symbol(";");
    if (cur().kind != Tok::End) unexpected();
    return st;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur().line, cur().column); }
  [[noreturn]] void unsupported(const std::string& what) const {
    throw Error(ErrorCode::UnsupportedConstruct, "unsupported construct " + what + " at line " +
                                                     std::to_string(cur().line) + ", column " +
                                                     std::to_string(cur().column));
  }
  [[noreturn]] void unexpected() const {
    const auto& t = cur();
    if (t.kind == Tok::End) fail("unexpected end of input");
    if (t.kind == Tok::Ident) {
      const auto u = upper(t.text);
      if (u == "OR" || u == "IN" || u == "LIKE" || u == "BETWEEN" || u == "JOIN" || u == "LEFT" || u == "RIGHT" ||
          u == "INNER" || u == "OUTER" || u == "FULL" || u == "CROSS" || u == "NATURAL" || u == "HAVING" ||
          u == "ORDER" || u == "LIMIT" || u == "UNION" || u == "IS" || u == "NOT" || u == "ON" || u == "CASE" ||
          u == "WITH" || u == "EXCEPT" || u == "INTERSECT")
        unsupported(u);
    }
    if (t.kind == Tok::Symbol && (t.text == "+" || t.text == "-" || t.text == "/" || t.text == "%" || t.text == "||"))
      unsupported("arithmetic operator '" + t.text + "'");
    fail("unexpected token '" + t.text + "'");
  }

  bool peek_keyword(const char* kw) const { return cur().kind == Tok::Ident && upper(cur().text) == kw; }
  bool keyword(const char* kw) {
    if (!peek_keyword(kw)) return false;
    ++pos_;
    return true;
  }
  void expect_keyword(const char* kw) {
    if (!keyword(kw)) {
      if (cur().kind == Tok::End) fail(std::string("expected ") + kw);
      if (cur().kind == Tok::Ident && is_reserved(cur().text) && !peek_keyword(kw)) unexpected();
      fail(std::string("expected ") + kw + " but found '" + cur().text + "'");
    }
  }
  bool peek_symbol(const char* s) const { return cur().kind == Tok::Symbol && cur().text == s; }
  bool symbol(const char* s) {
    if (!peek_symbol(s)) return false;
    ++pos_;
    return true;
  }
  void expect_symbol(const char* s) {
    if (!symbol(s)) {
      if (cur().kind == Tok::End) fail(std::string("expected '") + s + "'");
      unexpected();
    }
  }
  std::string identifier(const char* what) {
    if (cur().kind != Tok::Ident || is_reserved(cur().text)) {
      if (cur().kind == Tok::Ident || cur().kind == Tok::Symbol) unexpected();
      fail(std::string("expected ") + what);
    }
    return advance().text;
  }

  ColumnRef column_ref() {
    ColumnRef ref;
    ref.line = cur().line;
    ref.column = cur().column;
    auto first = identifier("column name");
    if (symbol(".")) {
      ref.qualifier = std::move(first);
      ref.name = identifier("column name");
    } else {
      ref.name = std::move(first);
    }
    return ref;
  }

  Value number(bool negative) {
    const auto text = advance().text;
    const auto signed_text = negative ? "-" + text : text;
    if (text.find_first_of(".eE") == std::string::npos) {
      std::int64_t v = 0;
      auto res = std::from_chars(signed_text.data(), signed_text.data() + signed_text.size(), v);
      if (res.ec == std::errc() && res.ptr == signed_text.data() + signed_text.size()) return v;
    }
    return std::stod(signed_text);
  }

  std::optional<Value> literal() {
    if (cur().kind == Tok::String) return Value{advance().text};
    if (cur().kind == Tok::Number) return number(false);
    if (peek_symbol("-") && toks_[pos_ + 1].kind == Tok::Number) {
      advance();
      return number(true);
    }
    if (peek_symbol("+") && toks_[pos_ + 1].kind == Tok::Number) {
      advance();
      return number(false);
    }
    return std::nullopt;
  }

  Operand operand() {
    Operand op;
    if (auto lit = literal()) {
      op.kind = Operand::Kind::Literal;
      op.literal = std::move(*lit);
    } else if (peek_keyword("CAST")) {
      advance();
      expect_symbol("(");
      op.kind = Operand::Kind::Column;
      op.column = column_ref();
      expect_keyword("AS");
      op.cast_type = upper(identifier("type name"));
      expect_symbol(")");
    } else if (peek_symbol("(")) {
      unsupported("subquery or parenthesised expression");
    } else {
      op.kind = Operand::Kind::Column;
      op.column = column_ref();
    }
    if (cur().kind == Tok::Symbol &&
        (cur().text == "+" || cur().text == "-" || cur().text == "*" || cur().text == "/" || cur().text == "%"))
      unsupported("arithmetic operator '" + cur().text + "'");
    return op;
  }

  std::optional<CompareOp> compare_op() {
    if (cur().kind != Tok::Symbol) return std::nullopt;
    const auto& s = cur().text;
    std::optional<CompareOp> op;
    if (s == "=") op = CompareOp::Eq;
    if (s == "!=" || s == "<>") op = CompareOp::Ne;
    if (s == "<") op = CompareOp::Lt;
    if (s == "<=") op = CompareOp::Le;
    if (s == ">") op = CompareOp::Gt;
    if (s == ">=") op = CompareOp::Ge;
    if (op) ++pos_;
    return op;
  }

  Conjunct conjunct() {
    if (keyword("EXISTS")) {
      expect_symbol("(");
      auto sub = std::make_shared<SelectStmt>(select());
      expect_symbol(")");
      return Exists{std::move(sub)};
    }
    if (peek_keyword("NOT")) unsupported("NOT");
    if (peek_symbol("(")) unsupported("parenthesised condition");
    Comparison c;
    c.lhs = operand();
    auto op = compare_op();
    if (!op) unexpected();
    c.op = *op;
    c.rhs = operand();
    return c;
  }

  SelectItem select_item() {
    SelectItem item;
    if (symbol("*")) {
      item.kind = SelectItem::Kind::Star;
      return item;
    }
    if (cur().kind == Tok::Ident && toks_[pos_ + 1].kind == Tok::Symbol && toks_[pos_ + 1].text == "(") {
      auto fn = aggregate_fn(cur().text);
      if (!fn) {
        if (peek_keyword("CAST")) unsupported("CAST in select list");
        unsupported("function '" + cur().text + "'");
      }
      advance();
      expect_symbol("(");
      item.kind = SelectItem::Kind::Aggregate;
      item.fn = *fn;
      if (keyword("DISTINCT")) item.distinct = true;
      if (symbol("*")) {
        if (*fn != AggFn::Count || item.distinct) fail("'*' is only valid in COUNT(*)");
        item.count_star = true;
      } else {
        if (peek_symbol("(") || cur().kind == Tok::Number) unsupported("expression inside aggregate");
        item.column = column_ref();
      }
      if (!peek_symbol(")")) {
        if (cur().kind == Tok::Symbol && cur().text != ")") unsupported("arithmetic inside aggregate");
        unexpected();
      }
      advance();
    } else if (auto lit = literal()) {
      item.kind = SelectItem::Kind::Constant;
      item.constant = std::move(*lit);
    } else {
      item.kind = SelectItem::Kind::Column;
      item.column = column_ref();
    }
    if (cur().kind == Tok::Symbol &&
        (cur().text == "+" || cur().text == "-" || cur().text == "*" || cur().text == "/"))
      unsupported("arithmetic in select list");
    if (keyword("AS")) item.alias = identifier("alias");
    return item;
  }

  SelectStmt select() {
    SelectStmt st;
    expect_keyword("SELECT");
    if (peek_keyword("DISTINCT")) unsupported("SELECT DISTINCT");
    do {
      st.items.push_back(select_item());
    } while (symbol(","));
    expect_keyword("FROM");
    do {
      if (peek_symbol("(")) unsupported("subquery in FROM");
      TableRef t;
      t.table = identifier("table name");
      if (keyword("AS")) {
        t.alias = identifier("alias");
      } else if (cur().kind == Tok::Ident && !is_reserved(cur().text)) {
        t.alias = advance().text;
      } else {
        t.alias = t.table;
      }
      st.from.push_back(std::move(t));
    } while (symbol(","));
    if (keyword("WHERE")) {
      do {
        st.where.push_back(conjunct());
      } while (keyword("AND"));
    }
    if (keyword("GROUP")) {
      expect_keyword("BY");
      do {
        st.group_by.push_back(column_ref());
      } while (symbol(","));
    }
    return st;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Statement parse_statement(std::string_view text) {
  Parser p(lex(text));
  return p.statement();
}

std::vector<std::string> split_statements(std::string_view script) {
  std::vector<std::string> out;
  std::string cur;
  bool in_string = false;
  for (char c : script) {
    if (c == '\'') in_string = !in_string;
    if (c == ';' && !in_string) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(cur);
  std::vector<std::string> trimmed;
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    const auto e = s.find_last_not_of(" \t\r\n");
    trimmed.push_back(s.substr(b, e - b + 1));
  }
  return trimmed;
}

}  // namespace smash::sql
