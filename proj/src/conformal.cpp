#include "confcurv/conformal.hpp"

namespace confcurv {

MatrixXd modified_schouten_at(const MetricField& g, double tau, const VectorXd& x) {
  const MetricJets<double> jets = metric_jets(g, x);
  const CurvaturePoint<double> c = riemann(jets);
  return modified_schouten(c.ric, c.scal, jets.value, tau);
}

MatrixXd direct_oracle(const MetricField& g, const ScalarField& u, double tau,
                       const VectorXd& x) {
  return modified_schouten_at(g.conformal(u), tau, x);
}

CovariantJet<double> covariant_jet_at(const MetricField& g, const ScalarField& u,
                                      const VectorXd& x) {
  const MetricJets<double> jets = metric_jets(g, x);
  return covariant_hessian(u.jet(x), christoffel(jets.value, jets.d), jets.value);
}

}  // namespace confcurv
