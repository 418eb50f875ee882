#include "nhk/sampling.hpp"

namespace nhk {

bool DomainBox::contains(const Vec& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return !admissible || admissible(x);
}

Vec DomainBox::sample(Sampler& s) const {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec x = s.uniform(lo, hi);
    if (!admissible || admissible(x)) return x;
  }
  fail(ErrorKind::DomainViolation, "domain box has no admissible points: " + description);
}

std::vector<Vec> DomainBox::sample(Sampler& s, int count) const {
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample(s));
  return out;
}

}  // namespace nhk
