#include "thetanorm/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace thetanorm {

Monomial Monomial::variable(Variable v, std::uint32_t exponent) {
  Monomial m;
  if (exponent > 0) {
    m.factors_.emplace_back(v, exponent);
    m.degree_ = exponent;
  }
  return m;
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end());
  Monomial m;
  for (const auto& [v, e] : factors) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == v)
      m.factors_.back().second += e;
    else
      m.factors_.emplace_back(v, e);
    m.degree_ += e;
  }
  return m;
}

Monomial Monomial::from_variables(std::vector<Variable> vars) {
  std::vector<Factor> factors;
  factors.reserve(vars.size());
  for (Variable v : vars) factors.emplace_back(v, 1);
  return from_factors(std::move(factors));
}

std::uint32_t Monomial::exponent(Variable v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{v, 0});
  return (it != factors_.end() && it->first == v) ? it->second : 0;
}

std::vector<Variable> Monomial::expanded() const {
  std::vector<Variable> out;
  out.reserve(degree_);
  for (const auto& [v, e] : factors_)
    for (std::uint32_t i = 0; i < e; ++i) out.push_back(v);
  return out;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  auto it = other.factors_.begin();
  for (const auto& [v, e] : factors_) {
    while (it != other.factors_.end() && it->first < v) ++it;
    if (it == other.factors_.end() || it->first != v || it->second < e) return false;
  }
  return true;
}

Monomial Monomial::cofactor_in(const Monomial& other) const {
  Monomial q;
  auto it = factors_.begin();
  for (const auto& [v, e] : other.factors_) {
    while (it != factors_.end() && it->first < v) ++it;
    std::uint32_t mine = (it != factors_.end() && it->first == v) ? it->second : 0;
    if (mine > e) throw std::logic_error("monomial does not divide");
    if (e > mine) {
      q.factors_.emplace_back(v, e - mine);
      q.degree_ += e - mine;
    }
  }
  return q;
}

Monomial Monomial::lcm(const Monomial& other) const {
  Monomial out;
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    Factor f;
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      f = *a++;
    } else if (a == factors_.end() || b->first < a->first) {
      f = *b++;
    } else {
      f = {a->first, std::max(a->second, b->second)};
      ++a;
      ++b;
    }
    out.factors_.push_back(f);
    out.degree_ += f.second;
  }
  return out;
}

bool Monomial::coprime(const Monomial& other) const {
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first == b->first) return false;
    if (a->first < b->first)
      ++a;
    else
      ++b;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto x = a.factors_.begin();
  auto y = b.factors_.begin();
  while (x != a.factors_.end() || y != b.factors_.end()) {
    if (y == b.factors_.end() || (x != a.factors_.end() && x->first < y->first)) {
      out.factors_.push_back(*x++);
    } else if (x == a.factors_.end() || y->first < x->first) {
      out.factors_.push_back(*y++);
    } else {
      out.factors_.emplace_back(x->first, x->second + y->second);
      ++x;
      ++y;
    }
  }
  out.degree_ = a.degree_ + b.degree_;
  return out;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& [v, e] : factors_) {
    h ^= (static_cast<std::size_t>(v) << 8) ^ e;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::strong_ordering grevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  auto ia = fa.rbegin();
  auto ib = fb.rbegin();
  while (ia != fa.rend() || ib != fb.rend()) {
    if (ib == fb.rend() || (ia != fa.rend() && ia->first > ib->first)) {
      // smallest differing variable occurs only in a: alpha - beta > 0 there
      return std::strong_ordering::less;
    }
    if (ia == fa.rend() || ib->first > ia->first) return std::strong_ordering::greater;
    if (ia->second != ib->second)
      return ia->second < ib->second ? std::strong_ordering::greater : std::strong_ordering::less;
    ++ia;
    ++ib;
  }
  return std::strong_ordering::equal;
}

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial::one(), constant);
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& coefficient) {
  Polynomial p;
  if (coefficient != 0) p.terms_.emplace(m, coefficient);
  return p;
}

Polynomial Polynomial::variable(Variable v) { return monomial(Monomial::variable(v)); }

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw std::logic_error("zero polynomial has no leading term");
  return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw std::logic_error("zero polynomial has no leading term");
  return terms_.begin()->second;
}

std::uint32_t Polynomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::add_multiple(const Rational& scale, const Monomial& m, const Polynomial& other) {
  if (scale == 0) return;
  for (const auto& [mono, c] : other.terms_) add_term(m * mono, scale * c);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scale;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [m, c] : a.terms_) out.add_multiple(c, m, b);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Rational parse_rational(const std::string& literal) {
  std::string s = literal;
  if (s.empty()) throw std::invalid_argument("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + literal + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.');
       ++pos) {
    if (s[pos] == '.') {
      if (seen_point) throw std::invalid_argument("invalid number '" + literal + "'");
      seen_point = true;
    } else {
      digits += s[pos];
      if (seen_point) ++frac_digits;
    }
  }
  if (digits.empty()) throw std::invalid_argument("invalid number '" + literal + "'");
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("invalid number '" + literal + "'");
    std::string exp_text = s.substr(pos + 1);
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid exponent in '" + literal + "'");
    }
    if (used != exp_text.size() || exp_text.empty())
      throw std::invalid_argument("invalid exponent in '" + literal + "'");
  }
  mpz_class mantissa(digits, 10);
  long shift = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

namespace {

class PolynomialParser {
 public:
  PolynomialParser(const std::string& text, const Shape& shape) : shape_(shape) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  Polynomial parse() {
    if (s_.empty()) throw error("empty polynomial");
    Polynomial p;
    bool first = true;
    while (pos_ < s_.size()) {
      Rational sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = next() == '-' ? -1 : 1;
      } else if (!first) {
        throw error("expected '+' or '-'");
      }
      auto [m, c] = term();
      p.add_term(m, sign * c);
      first = false;
    }
    return p;
  }

 private:
  std::invalid_argument error(const std::string& what) const {
    return std::invalid_argument("polynomial parse error at position " + std::to_string(pos_) +
                                 ": " + what);
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char next() { return s_[pos_++]; }

  std::pair<Monomial, Rational> term() {
    Monomial m;
    Rational c = 1;
    for (;;) {
      factor(m, c);
      if (peek() != '*') break;
      ++pos_;
    }
    return {m, c};
  }

  void factor(Monomial& m, Rational& c) {
    char ch = peek();
    if (ch == 'x') {
      ++pos_;
      if (peek() != '[') throw error("expected '[' after x");
      ++pos_;
      std::vector<int> coords;
      for (;;) {
        coords.push_back(integer());
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          break;
        }
        throw error("expected ',' or ']'");
      }
      MultiIndex a(std::move(coords));
      if (!shape_.contains(a)) throw error("index [" + a.to_string() + "] outside shape " + shape_.to_string());
      int e = 1;
      if (peek() == '^') {
        ++pos_;
        e = integer();
        if (e < 0) throw error("negative exponent");
      }
      m = m * Monomial::variable(static_cast<Variable>(shape_.offset(a)), static_cast<std::uint32_t>(e));
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size()) {
        char d = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == '/') {
          ++pos_;
        } else if ((d == 'e' || d == 'E')) {
          ++pos_;
          if (peek() == '+' || peek() == '-') ++pos_;
        } else {
          break;
        }
      }
      c *= parse_rational(s_.substr(start, pos_ - start));
    } else {
      throw error(ch == '\0' ? "unexpected end of input" : std::string("unexpected '") + ch + "'");
    }
  }

  int integer() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw error("expected integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  const Shape& shape_;
  std::string s_;
  std::size_t pos_ = 0;
};

std::string format_rational(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, const Shape& shape) {
  return PolynomialParser(text, shape).parse();
}

std::string format_monomial(const Monomial& m, const Shape& shape) {
  if (m.is_one()) return "1";
  std::string out;
  for (const auto& [v, e] : m.factors()) {
    if (!out.empty()) out += '*';
    out += "x[" + shape.index(v).to_string() + "]";
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

std::string format_polynomial(const Polynomial& p, const Shape& shape) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (m.is_one()) {
      out += format_rational(mag);
    } else {
      if (mag != 1) out += format_rational(mag) + "*";
      out += format_monomial(m, shape);
    }
  }
  return out;
}

}  // namespace thetanorm
