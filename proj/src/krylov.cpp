#include <cmath>
#include <algorithm>
#include <limits>

#include "pfmcl/solver.hpp"

namespace pfmcl {

KrylovResult bicgstab(const LinearMap& op, const LinearMap& precond, const Eigen::VectorXd& b,
                      double tol, int maxit, const Eigen::VectorXd* x0, const InnerProduct& dot_in,
                      double abs_floor) {
  InnerProduct dot = dot_in ? dot_in : [](const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
    return a.dot(c);
  };
  auto norm = [&dot](const Eigen::VectorXd& v) { return std::sqrt(std::max(dot(v, v), 0.0)); };
  auto pre = [&precond](const Eigen::VectorXd& v) { return precond ? precond(v) : v; };

  KrylovResult res;
  res.x = x0 ? *x0 : Eigen::VectorXd::Zero(b.size());
  const double bnorm = norm(b);
  const double stop = std::max(tol * bnorm, abs_floor);
  if (bnorm == 0.0) {
    res.x.setZero();
    return res;
  }

  Eigen::VectorXd r = b - op(res.x);
  double rel = norm(r) / bnorm;
  Eigen::VectorXd best = res.x;
  double best_rel = rel;
  if (rel * bnorm <= stop) {
    res.residual = rel;
    return res;
  }

  Eigen::VectorXd rhat = r;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(b.size());
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const double tiny = std::numeric_limits<double>::epsilon();

  for (int it = 1; it <= maxit; ++it) {
    res.iterations = it;
    double rho_new = dot(rhat, r);
    if (std::abs(rho_new) <= tiny * tiny * dot(rhat, rhat) || std::abs(omega) < tiny * 1e-8) {
      if (res.restarts > 0)
        throw SolverError("bicgstab: breakdown after restart", best, best_rel, it);
      ++res.restarts;
      r = b - op(res.x);
      rhat = r;
      p.setZero();
      v.setZero();
      rho = alpha = omega = 1.0;
      rho_new = dot(rhat, r);
    }
    double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    p = r + beta * (p - omega * v);
    Eigen::VectorXd phat = pre(p);
    v = op(phat);
    double rv = dot(rhat, v);
    if (rv == 0.0) {
      if (res.restarts > 0)
        throw SolverError("bicgstab: breakdown after restart", best, best_rel, it);
      ++res.restarts;
      r = b - op(res.x);
      rhat = r;
      p.setZero();
      v.setZero();
      rho = alpha = omega = 1.0;
      continue;
    }
    alpha = rho / rv;
    Eigen::VectorXd s = r - alpha * v;
    double srel = norm(s) / bnorm;
    if (srel * bnorm <= stop) {
      res.x += alpha * phat;
      res.residual = srel;
      return res;
    }
    Eigen::VectorXd shat = pre(s);
    Eigen::VectorXd t = op(shat);
    double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    res.x += alpha * phat + omega * shat;
    r = s - omega * t;
    rel = norm(r) / bnorm;
    if (!std::isfinite(rel))
      throw SolverError("bicgstab: non-finite residual", best, best_rel, it);
    if (rel < best_rel) {
      best_rel = rel;
      best = res.x;
    }
    if (rel * bnorm <= stop) {
      res.residual = rel;
      return res;
    }
  }
  throw SolverError("bicgstab: no convergence within " + std::to_string(maxit) + " iterations",
                    best, best_rel, maxit);
}

}  // namespace pfmcl
