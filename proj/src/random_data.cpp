#include "rlfrac/random_data.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rlfrac/errors.hpp"

namespace rlfrac {

DataProfile DataProfile::parse(const std::string& s) {
  if (s == "flat") return {Kind::flat, 0.0};
  const std::string head = "powerlaw(";
  if (s.rfind(head, 0) == 0 && s.size() > head.size() + 1 && s.back() == ')') {
    const std::string num = s.substr(head.size(), s.size() - head.size() - 1);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == num.size() && used > 0 && std::isfinite(p)) return {Kind::powerlaw, p};
  }
  throw InvalidArgument("profile: expected 'flat' or 'powerlaw(p)', got '" + s + "'");
}

std::string DataProfile::str() const {
  if (kind == Kind::flat) return "flat";
  std::ostringstream os;
  os << "powerlaw(" << p << ")";
  return os.str();
}

double DataProfile::weight(int n) const { return kind == Kind::flat ? 1.0 : std::pow(n, -p); }

double NormalStream::uniform() {
  // 53 random bits -> (0, 1)
  return ((engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::vector<double> random_coefficients(NormalStream& rng, int n, const DataProfile& profile) {
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = profile.weight(k + 1) * rng.next();
  return c;
}

ModalData random_modal_data(const DomainSpec& d, std::uint64_t seed, const DataProfile& profile) {
  NormalStream rng(seed);
  auto c1 = random_coefficients(rng, d.n_modes(), profile);
  auto c2 = random_coefficients(rng, d.n_modes(), profile);
  return {d, std::move(c1), std::move(c2)};
}

ModalData normalize_unit(const ModalData& m, double mu) {
  const auto lambdas = m.domain.lambdas();
  ModalData out = m;
  const double n1 = graded_norm(m.c1, mu, lambdas);
  const double n2 = graded_norm(m.c2, mu + 0.5, lambdas);
  if (n1 > 0.0)
    for (auto& v : out.c1) v /= n1;
  if (n2 > 0.0)
    for (auto& v : out.c2) v /= n2;
  return out;
}

}  // namespace rlfrac
