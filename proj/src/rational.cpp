#include "latloc/rational.hpp"

#include <charconv>
#include <limits>

#include "latloc/error.hpp"

namespace latloc {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error("malformed number '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), text);
    auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (negative) whole.remove_prefix(1);
    if (frac.empty()) throw Error("malformed number '" + std::string(text) + "'");
    if (frac.size() > 15) throw Error("too many decimals in '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t int_part = whole.empty() ? 0 : parse_int(whole, text);
    std::int64_t frac_part = parse_int(frac, text);
    if (frac.find_first_not_of("0123456789") != std::string_view::npos) {
      throw Error("malformed number '" + std::string(text) + "'");
    }
    Rational r(int_part * scale + frac_part, scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t ceil(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  auto rem = r.numerator() % r.denominator();
  if (rem > 0) ++q;
  return q;
}

}  // namespace latloc
