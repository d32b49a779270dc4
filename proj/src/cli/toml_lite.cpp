#include "cli/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <string_view>

#include "cli/config.hpp"

namespace bf::cli {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  nlohmann::json value() {
    skip_ws();
    if (at_end()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"' || c == '\'') return string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

  std::string key() {
    skip_ws();
    if (!at_end() && (s_[pos_] == '"' || s_[pos_] == '\'')) return string().get<std::string>();
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (at_end() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void finish() {
    skip_ws();
    if (!at_end() && s_[pos_] != '#') fail("unexpected trailing text");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("TOML line " + std::to_string(line_) + ": " + what);
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  nlohmann::json string() {
    const char q = s_[pos_++];
    std::string out;
    while (!at_end() && s_[pos_] != q) {
      char c = s_[pos_++];
      if (q == '"' && c == '\\') {
        if (at_end()) break;
        c = s_[pos_++];
        switch (c) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': case '\\': break;
          default: fail("unsupported escape");
        }
      }
      out.push_back(c);
    }
    if (at_end()) fail("unterminated string");
    ++pos_;
    return out;
  }

  nlohmann::json number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == '+' ||
                         s_[pos_] == '-' || s_[pos_] == '_'))
      ++pos_;
    std::string tok;
    for (char c : s_.substr(start, pos_ - start))
      if (c != '_') tok.push_back(c);
    if (tok.empty()) fail("expected a value");
    const bool is_float = tok.find_first_of(".eEn") != std::string::npos;
    if (!is_float) {
      std::int64_t v = 0;
      const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), v);
      if (ec == std::errc() && p == tok.data() + tok.size()) return v;
    }
    double d = 0.0;
    const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
    auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), d);
    if (ec != std::errc() || p != tok.data() + tok.size()) fail("cannot parse value '" + tok + "'");
    return d;
  }

  nlohmann::json array() {
    ++pos_;
    nlohmann::json a = nlohmann::json::array();
    skip_ws();
    while (!at_end() && s_[pos_] != ']') {
      a.push_back(value());
      skip_ws();
      if (!at_end() && s_[pos_] == ',') {
        ++pos_;
        skip_ws();
      }
    }
    expect(']');
    return a;
  }

  nlohmann::json inline_table() {
    ++pos_;
    nlohmann::json t = nlohmann::json::object();
    skip_ws();
    while (!at_end() && s_[pos_] != '}') {
      const std::string k = key();
      expect('=');
      if (t.contains(k)) fail("duplicate key '" + k + "'");
      t[k] = value();
      skip_ws();
      if (!at_end() && s_[pos_] == ',') {
        ++pos_;
        skip_ws();
      }
    }
    expect('}');
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

std::string_view trim(std::string_view v) {
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
  return v;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const std::string_view line = trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const std::size_t close = line.find(']');
      Parser p(line, line_no);
      if (close == std::string_view::npos || line.substr(0, 2) == "[[") p.fail("unsupported table header");
      Parser rest(line.substr(close + 1), line_no);
      rest.finish();
      table = &root;
      std::string_view path = line.substr(1, close - 1);
      while (true) {
        const std::size_t dot = path.find('.');
        const std::string name(trim(path.substr(0, dot)));
        if (name.empty()) p.fail("empty table name");
        nlohmann::json& next = (*table)[name];
        if (next.is_null()) next = nlohmann::json::object();
        if (!next.is_object()) p.fail("'" + name + "' is not a table");
        table = &next;
        if (dot == std::string_view::npos) break;
        path = path.substr(dot + 1);
      }
      continue;
    }
    Parser p(line, line_no);
    const std::string k = p.key();
    p.expect('=');
    nlohmann::json v = p.value();
    p.finish();
    if (table->contains(k)) p.fail("duplicate key '" + k + "'");
    (*table)[k] = std::move(v);
  }
  return root;
}

}  // namespace bf::cli
