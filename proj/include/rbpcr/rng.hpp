#ifndef RBPCR_RNG_HPP
#define RBPCR_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rbpcr {

// splitmix64 step; used to mix tags into derived stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for a sub-stream identified by integer tags,
// e.g. derive_seed(master, {model_k, grid_index}). Independent of the
// order in which sub-streams are consumed, so parallel schedules do not
// change results.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = master;
  std::uint64_t out = splitmix64(s);
  for (std::uint64_t t : tags) {
    s ^= t + 0x9e3779b97f4a7c15ULL + (out << 6) + (out >> 2);
    out = splitmix64(s);
  }
  return out;
}

// Random stream with inverse-transform draws only, so sequences are
// reproducible bit-for-bit from the seed on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal();
  double normal(double mu, double sd) { return mu + sd * normal(); }

  // Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);
  double inverse_gamma(double shape, double rate) {
    return rate / gamma(shape);
  }

  // Normal truncated to (0, inf) by rejection.
  double truncated_normal_positive(double mu, double sd);

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rbpcr

#endif  // RBPCR_RNG_HPP
