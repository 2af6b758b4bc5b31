#include "softopt/mma.hpp"

#include <algorithm>
#include <cmath>

#include "softopt/error.hpp"

namespace softopt {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Subproblem {
  int n, m;
  ArrayXd low, upp, alfa, beta, p0, q0;
  MatrixXd P, Q;
  double a0;
  ArrayXd a, b, c, d;
};

struct PrimalDual {
  ArrayXd x, y, lam, xsi, eta, mu, s;
  double z, zet;
};

// Stacked KKT residual of the relaxed subproblem at barrier level epsi.
VectorXd residual(const Subproblem& sp, const PrimalDual& v, double epsi) {
  const ArrayXd ux1 = sp.upp - v.x, xl1 = v.x - sp.low;
  const ArrayXd ux2 = ux1 * ux1, xl2 = xl1 * xl1;
  const ArrayXd plam = sp.p0 + (sp.P.transpose() * v.lam.matrix()).array();
  const ArrayXd qlam = sp.q0 + (sp.Q.transpose() * v.lam.matrix()).array();
  const ArrayXd gvec = (sp.P * (1.0 / ux1).matrix()).array() + (sp.Q * (1.0 / xl1).matrix()).array();
  const ArrayXd dpsidx = plam / ux2 - qlam / xl2;
  const int n = sp.n, m = sp.m;
  VectorXd r(3 * n + 4 * m + 2);
  int k = 0;
  r.segment(k, n) = (dpsidx - v.xsi + v.eta).matrix(); k += n;
  r.segment(k, m) = (sp.c + sp.d * v.y - v.mu - v.lam).matrix(); k += m;
  r[k++] = sp.a0 - v.zet - (sp.a * v.lam).sum();
  r.segment(k, m) = (gvec - sp.a * v.z - v.y + v.s - sp.b).matrix(); k += m;
  r.segment(k, n) = (v.xsi * (v.x - sp.alfa) - epsi).matrix(); k += n;
  r.segment(k, n) = (v.eta * (sp.beta - v.x) - epsi).matrix(); k += n;
  r.segment(k, m) = (v.mu * v.y - epsi).matrix(); k += m;
  r[k++] = v.zet * v.z - epsi;
  r.segment(k, m) = (v.lam * v.s - epsi).matrix();
  return r;
}

// Primal-dual Newton method on the MMA subproblem.
PrimalDual subsolve(const Subproblem& sp) {
  const int n = sp.n, m = sp.m;
  const double epsimin = 1e-7;
  double epsi = 1.0;
  PrimalDual v;
  v.x = 0.5 * (sp.alfa + sp.beta);
  v.y = ArrayXd::Ones(m);
  v.z = 1.0;
  v.lam = ArrayXd::Ones(m);
  v.xsi = (1.0 / (v.x - sp.alfa)).max(1.0);
  v.eta = (1.0 / (sp.beta - v.x)).max(1.0);
  v.mu = (0.5 * sp.c).max(1.0);
  v.zet = 1.0;
  v.s = ArrayXd::Ones(m);

  while (epsi > epsimin) {
    VectorXd res = residual(sp, v, epsi);
    double resnorm = res.norm();
    double resmax = res.cwiseAbs().maxCoeff();
    int it = 0;
    while (resmax > 0.9 * epsi && it < 200) {
      ++it;
      const ArrayXd ux1 = sp.upp - v.x, xl1 = v.x - sp.low;
      const ArrayXd ux2 = ux1 * ux1, xl2 = xl1 * xl1;
      const ArrayXd ux3 = ux1 * ux2, xl3 = xl1 * xl2;
      const ArrayXd plam = sp.p0 + (sp.P.transpose() * v.lam.matrix()).array();
      const ArrayXd qlam = sp.q0 + (sp.Q.transpose() * v.lam.matrix()).array();
      const ArrayXd gvec = (sp.P * (1.0 / ux1).matrix()).array() + (sp.Q * (1.0 / xl1).matrix()).array();
      const MatrixXd GG = sp.P * (1.0 / ux2).matrix().asDiagonal() - sp.Q * (1.0 / xl2).matrix().asDiagonal();
      const ArrayXd dpsidx = plam / ux2 - qlam / xl2;
      const ArrayXd delx = dpsidx - epsi / (v.x - sp.alfa) + epsi / (sp.beta - v.x);
      const ArrayXd dely = sp.c + sp.d * v.y - v.lam - epsi / v.y;
      const double delz = sp.a0 - (sp.a * v.lam).sum() - epsi / v.z;
      const ArrayXd dellam = gvec - sp.a * v.z - v.y - sp.b + epsi / v.lam;
      const ArrayXd diagx = 2.0 * (plam / ux3 + qlam / xl3) + v.xsi / (v.x - sp.alfa) + v.eta / (sp.beta - v.x);
      const ArrayXd diagy = sp.d + v.mu / v.y;
      const ArrayXd diaglamyi = v.s / v.lam + 1.0 / diagy;

      // Reduced system in (dlam, dz); m is small.
      MatrixXd AA(m + 1, m + 1);
      AA.topLeftCorner(m, m) = GG * (1.0 / diagx).matrix().asDiagonal() * GG.transpose();
      AA.topLeftCorner(m, m).diagonal() += diaglamyi.matrix();
      AA.topRightCorner(m, 1) = sp.a.matrix();
      AA.bottomLeftCorner(1, m) = sp.a.matrix().transpose();
      AA(m, m) = -v.zet / v.z;
      VectorXd bb(m + 1);
      bb.head(m) = (dellam + dely / diagy).matrix() - GG * (delx / diagx).matrix();
      bb[m] = delz;
      const VectorXd sol = AA.fullPivLu().solve(bb);
      const ArrayXd dlam = sol.head(m).array();
      const double dz = sol[m];
      const ArrayXd dx = -delx / diagx - (GG.transpose() * dlam.matrix()).array() / diagx;
      const ArrayXd dy = -dely / diagy + dlam / diagy;
      const ArrayXd dxsi = -v.xsi + epsi / (v.x - sp.alfa) - (v.xsi * dx) / (v.x - sp.alfa);
      const ArrayXd deta = -v.eta + epsi / (sp.beta - v.x) + (v.eta * dx) / (sp.beta - v.x);
      const ArrayXd dmu = -v.mu + epsi / v.y - (v.mu * dy) / v.y;
      const double dzet = -v.zet + epsi / v.z - v.zet * dz / v.z;
      const ArrayXd ds = -v.s + epsi / v.lam - (v.s * dlam) / v.lam;

      // Largest step keeping all positive quantities positive and x inside (alfa, beta).
      double stm = 1.0;
      auto bound = [&](const ArrayXd& val, const ArrayXd& dval) {
        stm = std::max(stm, (-1.01 * dval / val).maxCoeff());
      };
      bound(v.y, dy);
      bound(v.lam, dlam);
      bound(v.xsi, dxsi);
      bound(v.eta, deta);
      bound(v.mu, dmu);
      bound(v.s, ds);
      stm = std::max(stm, -1.01 * dz / v.z);
      stm = std::max(stm, -1.01 * dzet / v.zet);
      stm = std::max(stm, (-1.01 * dx / (v.x - sp.alfa)).maxCoeff());
      stm = std::max(stm, (1.01 * dx / (sp.beta - v.x)).maxCoeff());
      double step = 1.0 / stm;

      const PrimalDual old = v;
      double resnew = 2.0 * resnorm;
      for (int back = 0; back < 50 && resnew > resnorm; ++back) {
        v.x = old.x + step * dx;
        v.y = old.y + step * dy;
        v.z = old.z + step * dz;
        v.lam = old.lam + step * dlam;
        v.xsi = old.xsi + step * dxsi;
        v.eta = old.eta + step * deta;
        v.mu = old.mu + step * dmu;
        v.zet = old.zet + step * dzet;
        v.s = old.s + step * ds;
        res = residual(sp, v, epsi);
        resnew = res.norm();
        step *= 0.5;
      }
      resnorm = resnew;
      resmax = res.cwiseAbs().maxCoeff();
    }
    epsi *= 0.1;
  }
  return v;
}

}  // namespace

Mma::Mma(int n, int m, MmaSettings settings) : n_(n), m_(m), settings_(settings) {
  if (n < 1 || m < 1) fail(ErrorKind::optimizer, "MMA needs at least one variable and one constraint");
}

void Mma::reset() { iter_ = 0; }

MmaResult Mma::update(const VectorXd& x, double /*f0*/, const VectorXd& df0dx, const VectorXd& fval,
                      const MatrixXd& dfdx, const VectorXd& xmin, const VectorXd& xmax) {
  if (x.size() != n_ || df0dx.size() != n_ || xmin.size() != n_ || xmax.size() != n_ || fval.size() != m_ ||
      dfdx.rows() != m_ || dfdx.cols() != n_)
    fail(ErrorKind::dimension, "MMA input sizes are inconsistent");
  if (!df0dx.allFinite() || !dfdx.allFinite() || !fval.allFinite())
    fail(ErrorKind::optimizer, "MMA received non-finite gradients or constraint values");
  const auto& st = settings_;
  ++iter_;
  const ArrayXd xv = x.array();
  const ArrayXd range = (xmax - xmin).array();

  if (iter_ <= 2) {
    low_ = (xv - st.asyinit * range).matrix();
    upp_ = (xv + st.asyinit * range).matrix();
  } else {
    const ArrayXd zzz = (xv - xold1_.array()) * (xold1_.array() - xold2_.array());
    ArrayXd factor = ArrayXd::Ones(n_);
    for (int j = 0; j < n_; ++j) {
      if (zzz[j] > 0.0) factor[j] = st.asyincr;
      else if (zzz[j] < 0.0) factor[j] = st.asydecr;
    }
    ArrayXd low = xv - factor * (xold1_.array() - low_.array());
    ArrayXd upp = xv + factor * (upp_.array() - xold1_.array());
    low = low.max(xv - 10.0 * range).min(xv - 0.01 * range);
    upp = upp.min(xv + 10.0 * range).max(xv + 0.01 * range);
    low_ = low.matrix();
    upp_ = upp.matrix();
  }

  Subproblem sp;
  sp.n = n_;
  sp.m = m_;
  sp.low = low_.array();
  sp.upp = upp_.array();
  sp.alfa = (sp.low + st.albefa * (xv - sp.low)).max(xv - st.move * range).max(xmin.array());
  sp.beta = (sp.upp - st.albefa * (sp.upp - xv)).min(xv + st.move * range).min(xmax.array());

  const ArrayXd xmami = range.max(1e-5);
  const ArrayXd ux1 = sp.upp - xv, xl1 = xv - sp.low;
  const ArrayXd ux2 = ux1 * ux1, xl2 = xl1 * xl1;
  const ArrayXd g0 = df0dx.array();
  ArrayXd p0 = g0.max(0.0), q0 = (-g0).max(0.0);
  const ArrayXd pq0 = 0.001 * (p0 + q0) + st.raa0 / xmami;
  sp.p0 = (p0 + pq0) * ux2;
  sp.q0 = (q0 + pq0) * xl2;
  sp.P.resize(m_, n_);
  sp.Q.resize(m_, n_);
  for (int i = 0; i < m_; ++i) {
    const ArrayXd gi = dfdx.row(i).transpose().array();
    const ArrayXd pi = gi.max(0.0), qi = (-gi).max(0.0);
    const ArrayXd pq = 0.001 * (pi + qi) + st.raa0 / xmami;
    sp.P.row(i) = ((pi + pq) * ux2).matrix().transpose();
    sp.Q.row(i) = ((qi + pq) * xl2).matrix().transpose();
  }
  sp.b = (sp.P * (1.0 / ux1).matrix() + sp.Q * (1.0 / xl1).matrix()).array() - fval.array();
  sp.a0 = st.a0;
  sp.a = ArrayXd::Constant(m_, st.a);
  sp.c = ArrayXd::Constant(m_, st.c);
  sp.d = ArrayXd::Constant(m_, st.d);

  const PrimalDual v = subsolve(sp);
  if (!v.x.allFinite()) fail(ErrorKind::optimizer, "MMA subproblem produced a non-finite design");

  xold2_ = iter_ >= 2 ? xold1_ : x;
  xold1_ = x;
  MmaResult r;
  r.x = v.x.max(sp.alfa).min(sp.beta).matrix();
  r.y = v.y.matrix();
  r.z = v.z;
  r.lambda = v.lam.matrix();
  return r;
}

}  // namespace softopt
