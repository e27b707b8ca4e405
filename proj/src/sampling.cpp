#include "hrigid/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace hrigid {

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

VectorXcd Rng::normal_cvector(int n) {
  VectorXcd v(n);
  for (int j = 0; j < n; ++j) v[j] = cd(normal(), normal());
  return v;
}

namespace {
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}
}  // namespace

Halton::Halton(int dim, std::uint64_t skip) : dim_(dim), index_(skip) {
  if (dim < 1 || dim > static_cast<int>(sizeof(kPrimes) / sizeof(int)))
    throw std::invalid_argument("Halton dimension out of range");
  bases_.assign(kPrimes, kPrimes + dim);
}

std::vector<double> Halton::next() {
  std::vector<double> p(dim_);
  for (int k = 0; k < dim_; ++k) p[k] = radical_inverse(index_, bases_[k]);
  ++index_;
  return p;
}

std::vector<HPoint> ball_lowdisc_points(const Ball& b, int count) {
  const int n = b.center.n();
  Halton seq(2 * n + 1);
  std::vector<HPoint> pts;
  pts.reserve(count / 4);
  for (int k = 0; k < count; ++k) {
    const auto u = seq.next();
    VectorXcd z(n);
    for (int j = 0; j < n; ++j)
      z[j] = cd((2.0 * u[j] - 1.0) * b.radius, (2.0 * u[j + n] - 1.0) * b.radius);
    const double t = (2.0 * u[2 * n] - 1.0) * b.radius * b.radius;
    HPoint y(z, t);
    if (knorm(y) < b.radius) pts.push_back(mul(b.center, y));
  }
  return pts;
}

HPoint box_uniform_point(const BoxRegion& box, Rng& rng) {
  const int n = box.center.n();
  VectorXcd z(n);
  for (int j = 0; j < n; ++j)
    z[j] = cd(rng.uniform(-box.radius, box.radius), rng.uniform(-box.radius, box.radius));
  const double t = rng.uniform(-box.radius * box.radius, box.radius * box.radius);
  return mul(box.center, HPoint(z, t));
}

HPoint ball_uniform_point(const Ball& b, Rng& rng) {
  const BoxRegion box{b.center, b.radius};
  while (true) {
    HPoint p = box_uniform_point(box, rng);
    if (kdist(b.center, p) < b.radius) return p;
  }
}

}  // namespace hrigid
