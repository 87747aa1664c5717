#include "nearherm/atoms.hpp"

#include <cmath>
#include <sstream>

#include "nearherm/types.hpp"

namespace nearherm {

AtomSpec AtomSpec::gaussian(double mean, double var) {
  AtomSpec s;
  s.kind = Kind::gaussian;
  s.a = mean;
  s.b = var;
  s.validate();
  return s;
}

AtomSpec AtomSpec::rademacher() {
  AtomSpec s;
  s.kind = Kind::rademacher;
  return s;
}

AtomSpec AtomSpec::uniform(double lo, double hi) {
  AtomSpec s;
  s.kind = Kind::uniform;
  s.a = lo;
  s.b = hi;
  s.validate();
  return s;
}

AtomSpec AtomSpec::two_point(double p, double lo, double hi) {
  AtomSpec s;
  s.kind = Kind::two_point;
  s.a = p;
  s.b = lo;
  s.c = hi;
  s.validate();
  return s;
}

void AtomSpec::validate() const {
  switch (kind) {
    case Kind::gaussian:
      if (!(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw contract_error("AtomSpec: gaussian needs finite mean, var >= 0");
      }
      break;
    case Kind::rademacher:
      break;
    case Kind::uniform:
      if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw contract_error("AtomSpec: uniform needs finite a <= b");
      }
      break;
    case Kind::two_point:
      if (!(a >= 0.0 && a <= 1.0) || !std::isfinite(b) || !std::isfinite(c)) {
        throw contract_error(
            "AtomSpec: two_point needs p in [0,1] and finite values");
      }
      break;
  }
}

double AtomSpec::mean() const {
  switch (kind) {
    case Kind::gaussian:
      return a;
    case Kind::rademacher:
      return 0.0;
    case Kind::uniform:
      return 0.5 * (a + b);
    case Kind::two_point:
      return a * c + (1.0 - a) * b;
  }
  return 0.0;
}

double AtomSpec::variance() const {
  switch (kind) {
    case Kind::gaussian:
      return b;
    case Kind::rademacher:
      return 1.0;
    case Kind::uniform: {
      const double w = b - a;
      return w * w / 12.0;
    }
    case Kind::two_point: {
      const double w = c - b;
      return a * (1.0 - a) * w * w;
    }
  }
  return 0.0;
}

bool AtomSpec::is_degenerate() const { return max_point_mass() >= 1.0; }

double AtomSpec::max_point_mass() const {
  switch (kind) {
    case Kind::gaussian:
      return b == 0.0 ? 1.0 : 0.0;
    case Kind::rademacher:
      return 0.5;
    case Kind::uniform:
      return a == b ? 1.0 : 0.0;
    case Kind::two_point:
      if (b == c) return 1.0;
      return std::max(a, 1.0 - a);
  }
  return 1.0;
}

bool AtomSpec::is_bounded() const { return kind != Kind::gaussian; }

double AtomSpec::sample(Xoshiro256pp& rng) const {
  switch (kind) {
    case Kind::gaussian:
      return a + std::sqrt(b) * rng.gaussian();
    case Kind::rademacher:
      return rng.rademacher();
    case Kind::uniform:
      return rng.uniform(a, b);
    case Kind::two_point:
      return rng.uniform01() < a ? c : b;
  }
  return 0.0;
}

std::string AtomSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::gaussian:
      os << "gaussian(" << a << ", " << b << ")";
      break;
    case Kind::rademacher:
      os << "rademacher";
      break;
    case Kind::uniform:
      os << "uniform(" << a << ", " << b << ")";
      break;
    case Kind::two_point:
      os << "two_point(" << a << ", " << b << ", " << c << ")";
      break;
  }
  return os.str();
}

}  // namespace nearherm
