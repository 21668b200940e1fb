#include "dendro/rational.hpp"

#include <fmt/format.h>

#include <cctype>
#include <string>

#include "dendro/errors.hpp"

namespace dendro {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  const auto bad = [&] {
    return ParseError(fmt::format("malformed rational \"{}\"", text));
  };
  if (s.empty()) throw bad();
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool digits = false, slash = false, den_digits = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      (slash ? den_digits : digits) = true;
    } else if (s[i] == '/' && !slash && digits) {
      slash = true;
    } else {
      throw bad();
    }
  }
  if (!digits || (slash && !den_digits)) throw bad();
  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw bad();
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace dendro
