#pragma once

// Ring-map files. Two encodings:
//
//   text   # comment
//          codomain: a, b          (optional; default: order of appearance)
//          domain: x, y, z         (optional; default: order of the lines)
//          x = (a+b)^2
//          y = a^2 - b^2
//
//   json   {"domain_vars": [...], "codomain_vars": [...],
//           "images": [[[num, den, {"a": 2}], ...], ...]}
//
// Exponent records in JSON may also be dense arrays of length |codomain|.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mgimpl/polyring/ring_map.hpp"

namespace mgimpl::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(where + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline bool valid_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  for (char c : s) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

/// Variable table for the codomain. When not frozen, unknown identifiers are
/// appended in order of first appearance.
struct VariableTable {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint32_t> index;
  bool frozen = false;

  std::optional<std::uint32_t> lookup(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    if (frozen) return std::nullopt;
    auto id = static_cast<std::uint32_t>(names.size());
    names.push_back(name);
    index.emplace(name, id);
    return id;
  }
};

// Images are parsed before the codomain size is final, so they are kept as
// bare term maps and converted at the end.
using RawPoly = std::map<Monomial, Rational, GrlexDescending>;

inline void accumulate(RawPoly& p, const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = p.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

inline RawPoly raw_mul(const RawPoly& a, const RawPoly& b) {
  RawPoly r;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) accumulate(r, ma * mb, ca * cb);
  }
  return r;
}

/// Recursive-descent parser for + - * / ^ and parentheses over integer literals
/// and identifiers. Division is only by nonzero constants.
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::string where, std::size_t line, std::size_t col0, VariableTable& vars)
      : s_(text), where_(std::move(where)), line_(line), col0_(col0), vars_(vars) {}

  RawPoly parse() {
    RawPoly p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(where_, line_, col0_ + pos_ + 1, what); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RawPoly expr() {
    RawPoly acc = term();
    for (;;) {
      if (accept('+')) {
        for (const auto& [m, c] : term()) accumulate(acc, m, c);
      } else if (accept('-')) {
        for (const auto& [m, c] : term()) accumulate(acc, m, -c);
      } else {
        return acc;
      }
    }
  }

  RawPoly term() {
    RawPoly acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = raw_mul(acc, unary());
      } else if (accept('/')) {
        std::size_t at = pos_;
        RawPoly d = unary();
        if (d.size() != 1 || !d.begin()->first.is_one()) {
          pos_ = at;
          fail("division is only allowed by a nonzero constant");
        }
        Rational inv = Rational(1) / d.begin()->second;
        for (auto& [m, c] : acc) c *= inv;
      } else {
        return acc;
      }
    }
  }

  RawPoly unary() {
    if (accept('-')) {
      RawPoly p = unary();
      for (auto& [m, c] : p) c = -c;
      return p;
    }
    if (accept('+')) return unary();
    return power();
  }

  RawPoly power() {
    RawPoly base = primary();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      if (pos_ - start > 6) fail("exponent too large");
      unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
      RawPoly r;
      accumulate(r, Monomial{}, Rational(1));
      for (unsigned long k = 0; k < e; ++k) r = raw_mul(r, base);
      return r;
    }
    return base;
  }

  RawPoly primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    RawPoly p;
    if (c == '(') {
      ++pos_;
      p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      accumulate(p, Monomial{}, Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
      return p;
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      auto id = vars_.lookup(name);
      if (!id) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      accumulate(p, Monomial::variable(*id), Rational(1));
      return p;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::string where_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
  VariableTable& vars_;
};

inline std::vector<std::string> split_names(std::string_view list) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : list) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline QPolynomial finish(const RawPoly& raw, std::size_t m) {
  QPolynomial p(RationalField{}, m);
  for (const auto& [mono, c] : raw) p.add_term(mono, c);
  return p;
}

}  // namespace detail

inline RingMap parse_map_text(std::string_view text, const std::string& where = "<map>") {
  detail::VariableTable codomain;
  std::optional<std::vector<std::string>> declared_domain;
  std::optional<std::size_t> declared_domain_line;
  std::vector<std::string> lhs_order;
  std::unordered_map<std::string, detail::RawPoly> images;

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string body = detail::trim(line);
    if (body.empty()) continue;
    auto header = [&](std::string_view key) -> std::optional<std::string> {
      if (body.rfind(key, 0) == 0) {
        std::string rest = detail::trim(std::string_view(body).substr(key.size()));
        if (!rest.empty() && rest.front() == ':') return rest.substr(1);
      }
      return std::nullopt;
    };
    if (auto list = header("codomain")) {
      if (codomain.frozen || !codomain.names.empty()) throw ParseError(where, lineno, 1, "codomain declared twice or after use");
      for (const auto& name : detail::split_names(*list)) {
        if (!detail::valid_identifier(name)) throw ParseError(where, lineno, 1, "invalid variable name '" + name + "'");
        if (codomain.index.count(name)) throw ParseError(where, lineno, 1, "duplicate variable '" + name + "'");
        codomain.lookup(name);
      }
      codomain.frozen = true;
      continue;
    }
    if (auto list = header("domain")) {
      if (declared_domain) throw ParseError(where, lineno, 1, "domain declared twice");
      declared_domain = detail::split_names(*list);
      declared_domain_line = lineno;
      for (const auto& name : *declared_domain) {
        if (!detail::valid_identifier(name)) throw ParseError(where, lineno, 1, "invalid variable name '" + name + "'");
      }
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(where, lineno, 1, "expected 'name = expression'");
    std::string name = detail::trim(std::string_view(body).substr(0, eq));
    if (!detail::valid_identifier(name)) throw ParseError(where, lineno, 1, "invalid variable name '" + name + "'");
    if (images.count(name)) throw ParseError(where, lineno, 1, "duplicate variable '" + name + "'");
    const std::size_t offset = line.find('=') + 1;
    detail::ExpressionParser parser(std::string_view(line).substr(offset), where, lineno, offset, codomain);
    images.emplace(name, parser.parse());
    lhs_order.push_back(name);
  }

  std::vector<std::string> domain = declared_domain ? *declared_domain : lhs_order;
  if (domain.empty()) throw ParseError(where, lineno ? lineno : 1, 1, "map has no images");
  std::vector<QPolynomial> polys;
  for (const auto& name : domain) {
    auto it = images.find(name);
    if (it == images.end()) {
      throw ParseError(where, declared_domain_line.value_or(1), 1, "no image given for domain variable '" + name + "'");
    }
    polys.push_back(detail::finish(it->second, codomain.names.size()));
  }
  if (declared_domain && images.size() != domain.size()) {
    for (const auto& name : lhs_order) {
      if (std::find(domain.begin(), domain.end(), name) == domain.end()) {
        throw ParseError(where, *declared_domain_line, 1, "image given for undeclared variable '" + name + "'");
      }
    }
  }
  try {
    return RingMap(std::move(domain), std::move(codomain.names), std::move(polys));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, 1, 1, e.what());
  }
}

inline std::string emit_map_text(const RingMap& phi) {
  std::ostringstream os;
  os << "codomain:";
  for (std::size_t j = 0; j < phi.codomain_size(); ++j) os << (j ? ", " : " ") << phi.codomain_names()[j];
  os << "\ndomain:";
  for (std::size_t i = 0; i < phi.domain_size(); ++i) os << (i ? ", " : " ") << phi.domain_names()[i];
  os << '\n';
  for (std::size_t i = 0; i < phi.domain_size(); ++i) {
    os << phi.domain_names()[i] << " = " << to_string(phi.image(i), std::span<const std::string>(phi.codomain_names()))
       << '\n';
  }
  return os.str();
}

namespace detail {

inline nlohmann::json integer_to_json(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

inline Integer integer_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) {
    Integer z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ParseError(where, 1, 1, "bad integer '" + j.get<std::string>() + "'");
    return z;
  }
  throw ParseError(where, 1, 1, "expected an integer, got " + j.dump());
}

}  // namespace detail

inline nlohmann::json terms_to_json(const QPolynomial& p, const std::vector<std::string>& names) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    nlohmann::json exps = nlohmann::json::object();
    for (const auto& f : m.factors()) exps[names.at(f.var)] = f.exp;
    terms.push_back({detail::integer_to_json(c.get_num()), detail::integer_to_json(c.get_den()), exps});
  }
  return terms;
}

inline nlohmann::json map_to_json(const RingMap& phi) {
  nlohmann::json j;
  j["domain_vars"] = phi.domain_names();
  j["codomain_vars"] = phi.codomain_names();
  nlohmann::json images = nlohmann::json::array();
  for (const QPolynomial& img : phi.images()) images.push_back(terms_to_json(img, phi.codomain_names()));
  j["images"] = images;
  return j;
}

inline std::string emit_map_json(const RingMap& phi) { return map_to_json(phi).dump(2) + "\n"; }

inline RingMap parse_map_json(std::string_view text, const std::string& where = "<map>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset only; report it as a column on line 1
    throw ParseError(where, 1, e.byte, e.what());
  }
  auto names_of = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw ParseError(where, 1, 1, std::string("missing array '") + key + "'");
    std::vector<std::string> out;
    for (const auto& x : j[key]) {
      if (!x.is_string() || !detail::valid_identifier(x.get<std::string>())) {
        throw ParseError(where, 1, 1, std::string("invalid name in '") + key + "': " + x.dump());
      }
      out.push_back(x.get<std::string>());
    }
    return out;
  };
  std::vector<std::string> domain = names_of("domain_vars");
  std::vector<std::string> codomain = names_of("codomain_vars");
  std::unordered_map<std::string, std::uint32_t> cindex;
  for (std::uint32_t k = 0; k < codomain.size(); ++k) cindex.emplace(codomain[k], k);
  if (!j.contains("images") || !j["images"].is_array()) throw ParseError(where, 1, 1, "missing array 'images'");
  const auto& images = j["images"];
  if (images.empty()) throw ParseError(where, 1, 1, "map has no images");
  if (images.size() != domain.size()) {
    throw ParseError(where, 1, 1, std::to_string(images.size()) + " images for " + std::to_string(domain.size()) +
                                      " domain variables");
  }
  std::vector<QPolynomial> polys;
  for (std::size_t i = 0; i < images.size(); ++i) {
    QPolynomial p(RationalField{}, codomain.size());
    const std::string ctx = "image of '" + domain[i] + "'";
    if (!images[i].is_array()) throw ParseError(where, 1, 1, ctx + " is not a list of terms");
    for (const auto& t : images[i]) {
      if (!t.is_array() || t.size() != 3) throw ParseError(where, 1, 1, ctx + ": term must be [num, den, exponents]");
      Integer num = detail::integer_from_json(t[0], where);
      Integer den = detail::integer_from_json(t[1], where);
      if (sgn(den) == 0) throw ParseError(where, 1, 1, ctx + ": zero denominator");
      Rational c(num, den);
      c.canonicalize();
      std::vector<Monomial::Factor> factors;
      if (t[2].is_object()) {
        for (const auto& [name, e] : t[2].items()) {
          auto it = cindex.find(name);
          if (it == cindex.end()) throw ParseError(where, 1, 1, ctx + ": unknown variable '" + name + "'");
          if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0)) {
            throw ParseError(where, 1, 1, ctx + ": exponent of '" + name + "' must be a nonnegative integer");
          }
          factors.push_back({it->second, e.get<std::uint32_t>()});
        }
      } else if (t[2].is_array()) {
        if (t[2].size() != codomain.size()) throw ParseError(where, 1, 1, ctx + ": dense exponent record has wrong length");
        for (std::uint32_t k = 0; k < t[2].size(); ++k) {
          const auto& e = t[2][k];
          if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0)) {
            throw ParseError(where, 1, 1, ctx + ": exponents must be nonnegative integers");
          }
          factors.push_back({k, e.get<std::uint32_t>()});
        }
      } else {
        throw ParseError(where, 1, 1, ctx + ": exponent record must be an object or an array");
      }
      p.add_term(Monomial::from_factors(std::move(factors)), c);
    }
    polys.push_back(std::move(p));
  }
  try {
    return RingMap(std::move(domain), std::move(codomain), std::move(polys));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, 1, 1, e.what());
  }
}

/// Parses JSON when the first non-blank character is '{', text otherwise.
inline RingMap parse_map(std::string_view content, const std::string& where = "<map>") {
  for (char c : content) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_map_json(content, where);
    break;
  }
  return parse_map_text(content, where);
}

inline RingMap parse_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str(), path);
}

}  // namespace mgimpl::io
