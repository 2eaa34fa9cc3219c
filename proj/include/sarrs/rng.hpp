#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace sarrs {

// Deterministic normal generator. std::normal_distribution is not bit-stable
// across standard libraries, so gaussians come from an explicit Box-Muller
// transform over mt19937_64; identical seeds give identical streams anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Substream derivation: mixes the parent seed with caller-chosen indices so
  // replications/cells get independent, schedule-free streams.
  static Rng derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(a),      static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b),      static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c),      static_cast<std::uint32_t>(c >> 32)};
    Rng out(0);
    out.engine_.seed(seq);
    return out;
  }

  // Uniform on (0, 1]; never returns 0 so log() below is safe.
  double uniform() {
    const std::uint64_t v = engine_();
    return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Row-major fill so the draw order is part of the format.
  Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = gaussian();
    return out;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sarrs
