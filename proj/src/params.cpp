#include "hdg_biot/params.hpp"

#include "hdg_biot/types.hpp"

#include <sstream>

namespace hdg {

ModelParams ModelParams::with_defaults(int dim, int k, double mu, double lambda, double alpha, double c0,
                                       double kappa) {
  ModelParams p;
  p.dim = dim;
  p.k = k;
  p.mu = mu;
  p.lambda = lambda;
  p.alpha = alpha;
  p.c0 = c0;
  p.kappa = kappa;
  p.eta = default_penalty(dim, k);
  return p;
}

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw Error("invalid model parameter: " + what); };
  if (!(mu > 0)) fail("mu must be positive");
  if (!(lambda > 0)) fail("lambda must be positive");
  if (!(alpha > 0 && alpha <= 1)) fail("alpha must lie in (0, 1]");
  if (!(c0 >= 0)) fail("c0 must be non-negative");
  if (!(kappa > 0)) fail("kappa must be positive");
  if (!(eta > 1)) fail("eta must exceed 1");
  if (dim != 2 && dim != 3) fail("dim must be 2 or 3");
  if (k < 2) fail("k must be at least 2");
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> w;
  if (mu / lambda > 10.0) {
    std::ostringstream s;
    s << "mu/lambda = " << mu / lambda << " exceeds 10; robustness bounds assume a moderate ratio";
    w.push_back(s.str());
  }
  return w;
}

LameParameters lame_from_young(double young, double poisson) {
  if (!(young > 0) || !(poisson > 0 && poisson < 0.5)) throw Error("lame_from_young: need E > 0 and nu in (0, 0.5)");
  return {young * poisson / ((1 + poisson) * (1 - 2 * poisson)), young / (2 * (1 + poisson))};
}

}  // namespace hdg
