#include "anisoflow/errors.hpp"

#include <cstdio>

namespace anisoflow {
namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ConeViolation::ConeViolation(std::size_t node, double margin, double tau)
    : Error("ConeViolation: node " + std::to_string(node) + " left the k-convex cone (margin " + fmt_g(margin) +
            ") at tau = " + fmt_g(tau)),
      node_(node),
      margin_(margin),
      tau_(tau) {}

NonFiniteRhs::NonFiniteRhs(std::size_t node, double tau)
    : Error("NonFiniteRhs: non-finite right-hand side at node " + std::to_string(node) + ", tau = " + fmt_g(tau)),
      node_(node),
      tau_(tau) {}

StepTooSmall::StepTooSmall(double dt, double tau)
    : Error("StepTooSmall: dt = " + fmt_g(dt) + " at tau = " + fmt_g(tau)), dt_(dt), tau_(tau) {}

ScaleOverflow::ScaleOverflow(double lambda, double r)
    : Error("ScaleOverflow: lambda^beta g(r / lambda) not representable for lambda = " + fmt_g(lambda) +
            ", r = " + fmt_g(r)),
      lambda_(lambda),
      r_(r) {}

SingularMetric::SingularMetric(std::size_t node)
    : Error("SingularMetric: degenerate first fundamental form at node " + std::to_string(node)), node_(node) {}

}  // namespace anisoflow
