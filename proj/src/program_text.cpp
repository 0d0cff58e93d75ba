// Copyright 2026 The vizsynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serializer and recursive-descent parser for the tidyverse-like program text.

#include <cctype>
#include <optional>

#include "vizsynth/error.hpp"
#include "vizsynth/transform.hpp"

namespace vizsynth {

namespace {

constexpr std::string_view kPipe = " %>% ";

bool is_plain_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '.') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  }
  return s != "NA" && s != "TRUE" && s != "FALSE";
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string literal_text(const CellValue& v) {
  struct Visitor {
    std::string operator()(Missing) const { return "NA"; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return quote_string(s); }
    std::string operator()(Date d) const { return "as.Date(\"" + d.to_string() + "\")"; }
  };
  return std::visit(Visitor{}, v);
}

std::string column_list(const std::vector<std::string>& cols) {
  std::string out = "c(";
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ", ";
    out += quote_identifier(cols[i]);
  }
  return out + ")";
}

struct Serializer {
  std::string operator()(const PivotLonger& o) const {
    return "pivot_longer(cols = " + column_list(o.cols) + ", names_to = " +
           quote_string(o.names_to) + ", values_to = " + quote_string(o.values_to) + ")";
  }
  std::string operator()(const PivotWider& o) const {
    return "pivot_wider(names_from = " + quote_identifier(o.names_from) +
           ", values_from = " + quote_identifier(o.values_from) + ")";
  }
  std::string operator()(const Select& o) const {
    std::string out = "select(";
    for (std::size_t i = 0; i < o.cols.size(); ++i) {
      if (i) out += ", ";
      out += quote_identifier(o.cols[i]);
    }
    return out + ")";
  }
  std::string operator()(const Filter& o) const {
    return "filter(" + quote_identifier(o.col) + " " + std::string(compare_op_symbol(o.op)) +
           " " + literal_text(o.lit) + ")";
  }
  std::string operator()(const GroupSummarise& o) const {
    return "summarise(" + quote_identifier(o.out_name) + " = " +
           std::string(agg_func_name(o.agg)) + "(" + quote_identifier(o.target) +
           "), .by = " + column_list(o.group_cols) + ")";
  }
  std::string operator()(const CumSum& o) const {
    std::string out = "cumsum(" + quote_identifier(o.target);
    if (!o.group_cols.empty()) out += ", .by = " + column_list(o.group_cols);
    return out + ")";
  }
  std::string operator()(const Mutate& o) const {
    std::string rhs = std::holds_alternative<std::string>(o.rhs)
                          ? quote_identifier(std::get<std::string>(o.rhs))
                          : format_number(std::get<double>(o.rhs));
    return "mutate(" + quote_identifier(o.out_name) + " = " + quote_identifier(o.lhs) + " " +
           std::string(arith_op_symbol(o.op)) + " " + rhs + ")";
  }
  std::string operator()(const Separate& o) const {
    return "separate(" + quote_identifier(o.col) + ", into = c(" + quote_string(o.out1) + ", " +
           quote_string(o.out2) + "), sep = " + quote_string(o.delim) + ")";
  }
  std::string operator()(const Unite& o) const {
    return "unite(" + quote_string(o.out_name) + ", " + quote_identifier(o.col1) + ", " +
           quote_identifier(o.col2) + ", sep = " + quote_string(o.delim) + ")";
  }
};

// ---- parsing ----

enum class Tok { Ident, String, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, "", i_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(i_));
  }

  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  Token next() {
    std::size_t start = i_;
    char c = src_[i_];
    if (c == '`') {
      std::string text;
      ++i_;
      while (i_ < src_.size() && src_[i_] != '`') {
        if (src_[i_] == '\\' && i_ + 1 < src_.size()) ++i_;
        text += src_[i_++];
      }
      if (i_ >= src_.size()) fail("unterminated backquoted name");
      ++i_;
      return {Tok::Ident, text, start};
    }
    if (c == '"') {
      std::string text;
      ++i_;
      while (i_ < src_.size() && src_[i_] != '"') {
        char ch = src_[i_++];
        if (ch == '\\') {
          if (i_ >= src_.size()) break;
          char e = src_[i_++];
          switch (e) {
            case 'n': ch = '\n'; break;
            case 't': ch = '\t'; break;
            case 'r': ch = '\r'; break;
            default: ch = e;
          }
        }
        text += ch;
      }
      if (i_ >= src_.size()) fail("unterminated string");
      ++i_;
      return {Tok::String, text, start};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '.' ||
              ((src_[i_] == '+' || src_[i_] == '-') && (src_[i_ - 1] == 'e' || src_[i_ - 1] == 'E')))) {
        ++i_;
      }
      return {Tok::Number, std::string(src_.substr(start, i_ - start)), start};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '.' || c == '_') {
      while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                  src_[i_] == '_' || src_[i_] == '.')) {
        ++i_;
      }
      return {Tok::Ident, std::string(src_.substr(start, i_ - start)), start};
    }
    for (std::string_view p : {"%>%", "==", "!=", "<=", ">=", "|>"}) {
      if (src_.substr(i_, p.size()) == p) {
        i_ += p.size();
        return {Tok::Punct, std::string(p), start};
      }
    }
    if (std::string_view("(),=<>+-*/").find(c) != std::string_view::npos) {
      ++i_;
      return {Tok::Punct, std::string(1, c), start};
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  TransformProgram program() {
    TransformProgram prog;
    if (peek().kind == Tok::Ident && peek().text == "identity" && toks_[pos_ + 1].text == "(") {
      advance();
      expect("(");
      expect(")");
      expect_end();
      return prog;
    }
    prog.ops.push_back(op());
    while (peek().kind == Tok::Punct && (peek().text == "%>%" || peek().text == "|>")) {
      advance();
      prog.ops.push_back(op());
    }
    expect_end();
    return prog;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(peek().pos));
  }

  bool accept(std::string_view punct) {
    if (peek().kind == Tok::Punct && peek().text == punct) {
      advance();
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing '" + peek().text + "'");
  }
  void expect_keyword(std::string_view kw) {
    if (peek().kind != Tok::Ident || peek().text != kw) fail("expected '" + std::string(kw) + "'");
    advance();
    expect("=");
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected a column name");
    return advance().text;
  }
  std::string string_lit() {
    if (peek().kind != Tok::String) fail("expected a string literal");
    return advance().text;
  }
  double number() {
    bool negative = accept("-");
    if (peek().kind != Tok::Number) fail("expected a number");
    auto v = parse_number(advance().text);
    if (!v) fail("malformed number");
    return negative ? -*v : *v;
  }

  std::vector<std::string> column_vector() {
    if (peek().kind != Tok::Ident || peek().text != "c") fail("expected c(...)");
    advance();
    expect("(");
    std::vector<std::string> cols;
    if (!accept(")")) {
      do {
        cols.push_back(ident());
      } while (accept(","));
      expect(")");
    }
    return cols;
  }

  std::vector<std::string> string_vector() {
    if (peek().kind != Tok::Ident || peek().text != "c") fail("expected c(...)");
    advance();
    expect("(");
    std::vector<std::string> out;
    do {
      out.push_back(string_lit());
    } while (accept(","));
    expect(")");
    return out;
  }

  CellValue literal() {
    const Token& t = peek();
    if (t.kind == Tok::String) return advance().text;
    if (t.kind == Tok::Ident && t.text == "NA") {
      advance();
      return Missing{};
    }
    if (t.kind == Tok::Ident && t.text == "as.Date") {
      advance();
      expect("(");
      auto d = Date::parse(string_lit());
      if (!d) fail("malformed date literal");
      expect(")");
      return *d;
    }
    return number();
  }

  CompareOp compare_op() {
    for (auto op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Le, CompareOp::Ge, CompareOp::Lt,
                    CompareOp::Gt}) {
      if (accept(compare_op_symbol(op))) return op;
    }
    fail("expected a comparison operator");
  }

  TransformOp op() {
    std::string name = ident();
    expect("(");
    TransformOp result = [&]() -> TransformOp {
      if (name == "pivot_longer") {
        PivotLonger o;
        expect_keyword("cols");
        o.cols = column_vector();
        expect(",");
        expect_keyword("names_to");
        o.names_to = string_lit();
        expect(",");
        expect_keyword("values_to");
        o.values_to = string_lit();
        return o;
      }
      if (name == "pivot_wider") {
        PivotWider o;
        expect_keyword("names_from");
        o.names_from = ident();
        expect(",");
        expect_keyword("values_from");
        o.values_from = ident();
        return o;
      }
      if (name == "select") {
        Select o;
        do {
          o.cols.push_back(ident());
        } while (accept(","));
        return o;
      }
      if (name == "filter") {
        Filter o;
        o.col = ident();
        o.op = compare_op();
        o.lit = literal();
        return o;
      }
      if (name == "summarise") {
        GroupSummarise o;
        o.out_name = ident();
        expect("=");
        std::string agg = ident();
        bool known = false;
        for (auto f : {AggFunc::Sum, AggFunc::Mean, AggFunc::Count, AggFunc::Min, AggFunc::Max}) {
          if (agg == agg_func_name(f)) {
            o.agg = f;
            known = true;
          }
        }
        if (!known) fail("unknown aggregate '" + agg + "'");
        expect("(");
        o.target = ident();
        expect(")");
        expect(",");
        expect_keyword(".by");
        o.group_cols = column_vector();
        return o;
      }
      if (name == "cumsum") {
        CumSum o;
        o.target = ident();
        if (accept(",")) {
          expect_keyword(".by");
          o.group_cols = column_vector();
        }
        return o;
      }
      if (name == "mutate") {
        Mutate o;
        o.out_name = ident();
        expect("=");
        o.lhs = ident();
        bool known = false;
        for (auto a : {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div}) {
          if (!known && accept(arith_op_symbol(a))) {
            o.op = a;
            known = true;
          }
        }
        if (!known) fail("expected an arithmetic operator");
        if (peek().kind == Tok::Ident) {
          o.rhs = ident();
        } else {
          o.rhs = number();
        }
        return o;
      }
      if (name == "separate") {
        Separate o;
        o.col = ident();
        expect(",");
        expect_keyword("into");
        auto into = string_vector();
        if (into.size() != 2) fail("separate needs exactly two output names");
        o.out1 = into[0];
        o.out2 = into[1];
        expect(",");
        expect_keyword("sep");
        o.delim = string_lit();
        return o;
      }
      if (name == "unite") {
        Unite o;
        o.out_name = string_lit();
        expect(",");
        o.col1 = ident();
        expect(",");
        o.col2 = ident();
        expect(",");
        expect_keyword("sep");
        o.delim = string_lit();
        return o;
      }
      fail("unknown operator '" + name + "'");
    }();
    expect(")");
    return result;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string quote_identifier(std::string_view name) {
  if (is_plain_identifier(name)) return std::string(name);
  std::string out = "`";
  for (char c : name) {
    if (c == '`' || c == '\\') out += '\\';
    out += c;
  }
  return out + "`";
}

std::string serialize(const TransformOp& op) { return std::visit(Serializer{}, op); }

std::string serialize(const TransformProgram& prog) {
  if (prog.ops.empty()) return "identity()";
  std::string out;
  for (std::size_t i = 0; i < prog.ops.size(); ++i) {
    if (i) out += kPipe;
    out += serialize(prog.ops[i]);
  }
  return out;
}

TransformProgram parse_program(std::string_view text) { return Parser(text).program(); }

}  // namespace vizsynth
