#include "polstar/integer.hpp"

#include <ostream>
#include <stdexcept>

namespace polstar {

Int::Int(const std::string& s) {
  if (mpz_init_set_str(z_, s.c_str(), 10) != 0) {
    mpz_clear(z_);
    throw std::invalid_argument("Int: malformed integer literal '" + s + "'");
  }
}

std::string Int::str() const {
  char* buf = mpz_get_str(nullptr, 10, z_);
  std::string s(buf);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(buf, s.size() + 1);
  return s;
}

std::ostream& operator<<(std::ostream& os, const Int& v) { return os << v.str(); }

}  // namespace polstar
