#pragma once

// Seeded modal data: c_n = w_n z_n with z_n standard normal and a profile
// w_n (flat: 1, powerlaw(p): n^-p).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rlfrac/spectral_domain.hpp"

namespace rlfrac {

struct DataProfile {
  enum class Kind { flat, powerlaw } kind = Kind::flat;
  double p = 0.0;

  static DataProfile parse(const std::string& s);  // "flat" or "powerlaw(p)"
  std::string str() const;
  double weight(int n) const;  // n is 1-based
};

// mt19937_64 with a hand-written Box-Muller transform, so a seed yields the
// same numbers on every standard library.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  double uniform();
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::vector<double> random_coefficients(NormalStream& rng, int n, const DataProfile& profile);

// c1 and c2 drawn from one stream seeded by `seed` (c1 first).
ModalData random_modal_data(const DomainSpec& d, std::uint64_t seed, const DataProfile& profile);

// Rescales so that ||u1||_{D(A^mu)} = 1 and ||grad u2||_{D(A^mu)} = 1
// (a zero component stays zero).
ModalData normalize_unit(const ModalData& m, double mu);

}  // namespace rlfrac
