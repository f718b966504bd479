#include "hrs/config.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hrs {

std::size_t threat_rows(const ThreatModel& t) {
  return std::visit([](const auto& m) { return m.r; }, t);
}

std::string threat_label(const ThreatModel& t) {
  char buf[96];
  if (const auto* c = std::get_if<ContinuousL2>(&t)) {
    std::snprintf(buf, sizeof(buf), "r=%zu;eps=%.12g", c->r, c->epsilon);
  } else {
    const auto& d = std::get<DiscreteFlip>(t);
    std::snprintf(buf, sizeof(buf), "r=%zu;ra=%zu;rd=%zu", d.r, d.r_add, d.r_del);
  }
  return buf;
}

void validate_config(const SmoothingConfig& c) {
  if (const auto* u = std::get_if<UniformSelection>(&c.selection)) {
    if (!(u->p >= 0.0 && u->p <= 1.0)) {
      throw std::invalid_argument("selection probability must be in [0, 1]");
    }
  } else {
    const auto& pr = std::get<PerRowSelection>(c.selection);
    if (pr.ps.empty()) {
      throw std::invalid_argument("per-row selection requires at least one probability");
    }
    for (double p : pr.ps) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("selection probability must be in [0, 1]");
      }
    }
  }
  if (const auto* g = std::get_if<GaussianNoise>(&c.lower)) {
    if (!(g->sigma > 0.0) || !std::isfinite(g->sigma)) {
      throw std::invalid_argument("gaussian sigma must be positive and finite");
    }
  } else if (const auto* s = std::get_if<SparseFlipNoise>(&c.lower)) {
    if (!(s->p_plus >= 0.0 && s->p_plus < 1.0)) {
      throw std::invalid_argument("p_plus must be in [0, 1)");
    }
    if (!(s->p_minus > 0.0 && s->p_minus <= 1.0)) {
      throw std::invalid_argument("p_minus must be in (0, 1]");
    }
  }
}

void validate_threat(const ThreatModel& t) {
  if (const auto* c = std::get_if<ContinuousL2>(&t)) {
    if (!(c->epsilon >= 0.0) || !std::isfinite(c->epsilon)) {
      throw std::invalid_argument("epsilon must be non-negative and finite");
    }
  }
}

void validate_compatible(Domain domain, const SmoothingConfig& c, const ThreatModel& t,
                         std::size_t n_rows, std::size_t n_cols) {
  validate_config(c);
  validate_threat(t);

  if (std::holds_alternative<GaussianNoise>(c.lower) && domain != Domain::Real) {
    throw std::invalid_argument("gaussian noise requires real-valued data");
  }
  if (std::holds_alternative<SparseFlipNoise>(c.lower) && domain != Domain::Binary) {
    throw std::invalid_argument("sparse flip noise requires binary data");
  }
  if (const auto* pr = std::get_if<PerRowSelection>(&c.selection)) {
    if (pr->ps.size() != n_rows) {
      throw std::invalid_argument("per-row selection length must match row count");
    }
  }

  if (std::holds_alternative<ContinuousL2>(t)) {
    if (domain != Domain::Real) {
      throw std::invalid_argument("L2 threat model requires real-valued data");
    }
    if (std::holds_alternative<SparseFlipNoise>(c.lower)) {
      throw std::invalid_argument("L2 threat model cannot pair with sparse flip noise");
    }
  } else {
    const auto& d = std::get<DiscreteFlip>(t);
    if (domain != Domain::Binary) {
      throw std::invalid_argument("flip threat model requires binary data");
    }
    if (std::holds_alternative<GaussianNoise>(c.lower)) {
      throw std::invalid_argument("flip threat model cannot pair with gaussian noise");
    }
    if (d.r_add + d.r_del > d.r * n_cols) {
      throw std::invalid_argument("flip budget exceeds capacity of the perturbed rows");
    }
  }

  if (threat_rows(t) > n_rows) {
    throw std::invalid_argument("threat row budget exceeds matrix row count");
  }
}

}  // namespace hrs
