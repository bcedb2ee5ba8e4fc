#include "dropsvm/noise.hpp"

#include <algorithm>
#include <cmath>

#include "dropsvm/errors.hpp"

namespace dropsvm {

NoiseSpec NoiseSpec::dropout(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw ConfigError("dropout level must be in [0,1)");
  return NoiseSpec(NoiseKind::Dropout, q);
}

NoiseSpec NoiseSpec::gaussian(double sigma2) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
    throw ConfigError("gaussian noise variance must be >= 0");
  return NoiseSpec(NoiseKind::Gaussian, sigma2);
}

NoiseSpec NoiseSpec::laplace(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("laplace scale must be > 0");
  return NoiseSpec(NoiseKind::Laplace, scale);
}

NoiseSpec NoiseSpec::from_name(const std::string& kind, double level) {
  if (kind == "none") return none();
  if (kind == "dropout") return dropout(level);
  if (kind == "gaussian") return gaussian(level);
  // A zero scale is the absence of noise rather than a degenerate Laplace.
  if (kind == "laplace") return level == 0.0 ? none() : laplace(level);
  if (kind == "poisson") return poisson();
  throw ConfigError("unknown noise kind '" + kind +
                    "' (expected none, dropout, gaussian, laplace or poisson)");
}

std::string NoiseSpec::name() const {
  switch (kind_) {
    case NoiseKind::None: return "none";
    case NoiseKind::Dropout: return "dropout";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Laplace: return "laplace";
    case NoiseKind::Poisson: return "poisson";
  }
  return "none";
}

namespace {

const MomentEntry* find_entry(const std::vector<MomentEntry>& entries, std::size_t d) {
  const auto it = std::lower_bound(entries.begin(), entries.end(), d,
                                   [](const MomentEntry& e, std::size_t i) { return e.index < i; });
  return (it != entries.end() && it->index == d) ? &*it : nullptr;
}

void check_poisson_domain(const SparseVector& x) {
  for (const auto& e : x.entries())
    if (e.value < 0.0)
      throw DomainError("poisson noise needs non-negative features; feature " +
                        std::to_string(e.index) + " is " + std::to_string(e.value));
}

}  // namespace

double CorruptionMoments::mean_at(std::size_t d) const noexcept {
  const auto* e = find_entry(entries, d);
  return e ? e->mean : 0.0;
}

double CorruptionMoments::variance_at(std::size_t d) const noexcept {
  const auto* e = find_entry(entries, d);
  return (e ? e->variance : 0.0) + (d < uniform_limit ? uniform_variance : 0.0);
}

CorruptionMoments moments(const NoiseSpec& spec, const SparseVector& x, std::size_t dim) {
  if (x.extent() > dim) throw DimensionMismatch("example exceeds the feature dimension");
  CorruptionMoments m;
  m.uniform_limit = dim;
  m.entries.reserve(x.nnz() + 1);
  const double q = spec.level();
  switch (spec.kind()) {
    case NoiseKind::None:
      for (const auto& e : x.entries()) m.entries.push_back({e.index, e.value, 0.0});
      break;
    case NoiseKind::Dropout:
      for (const auto& e : x.entries())
        m.entries.push_back({e.index, e.value, q / (1.0 - q) * e.value * e.value});
      break;
    case NoiseKind::Gaussian:
      for (const auto& e : x.entries()) m.entries.push_back({e.index, e.value, 0.0});
      m.uniform_variance = q;
      break;
    case NoiseKind::Laplace:
      for (const auto& e : x.entries()) m.entries.push_back({e.index, e.value, 0.0});
      m.uniform_variance = 2.0 * q * q;
      break;
    case NoiseKind::Poisson:
      check_poisson_domain(x);
      for (const auto& e : x.entries()) m.entries.push_back({e.index, e.value, e.value});
      break;
  }
  return m;
}

SparseVector sample(const NoiseSpec& spec, const SparseVector& x, std::size_t dim, Rng& rng) {
  if (x.extent() > dim) throw DimensionMismatch("example exceeds the feature dimension");
  std::vector<Entry> out;
  switch (spec.kind()) {
    case NoiseKind::None:
      return x;
    case NoiseKind::Dropout: {
      const double q = spec.level();
      if (q == 0.0) return x;
      std::bernoulli_distribution drop(q);
      for (const auto& e : x.entries())
        if (!drop(rng)) out.push_back({e.index, e.value / (1.0 - q)});
      break;
    }
    case NoiseKind::Gaussian:
    case NoiseKind::Laplace: {
      if (spec.kind() == NoiseKind::Gaussian && spec.level() == 0.0) return x;
      std::normal_distribution<double> gauss(0.0, std::sqrt(spec.level()));
      std::exponential_distribution<double> expo(1.0);
      auto draw = [&] {
        if (spec.kind() == NoiseKind::Gaussian) return gauss(rng);
        const double a = expo(rng);
        const double b = expo(rng);
        return spec.level() * (a - b);
      };
      out.reserve(dim);
      auto it = x.entries().begin();
      for (std::size_t d = 0; d < dim; ++d) {
        double v = 0.0;
        if (it != x.entries().end() && it->index == d) v = (it++)->value;
        v += draw();
        if (v != 0.0) out.push_back({static_cast<FeatureIndex>(d), v});
      }
      break;
    }
    case NoiseKind::Poisson: {
      check_poisson_domain(x);
      for (const auto& e : x.entries()) {
        if (e.value == 0.0) continue;
        std::poisson_distribution<long long> pois(e.value);
        const auto k = pois(rng);
        if (k != 0) out.push_back({e.index, static_cast<double>(k)});
      }
      break;
    }
  }
  return SparseVector(std::move(out));
}

void append_offset(CorruptionMoments& m, std::size_t offset_index) {
  if (!m.entries.empty() && m.entries.back().index >= offset_index)
    throw DimensionMismatch("offset index collides with a feature");
  m.entries.push_back({static_cast<FeatureIndex>(offset_index), 1.0, 0.0});
  m.uniform_limit = std::min(m.uniform_limit, offset_index);
}

}  // namespace dropsvm
