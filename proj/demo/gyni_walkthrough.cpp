// Classical bound, quantum value and a simulated protocol session for the
// three-party cyclic scenario, with the noise level of a real experiment.
#include <cstdio>

#include "bellcc/bellcc.hpp"

int main() {
  using namespace bellcc;
  const auto ineq = gyni_inequality();
  const CcpInstance instance(ineq);

  const auto bound = classical_bound(ineq);
  std::printf("classical bound      %.0f  (success <= %.4f)\n", bound.value, classical_success_bound(ineq));

  for (const char* name : {"gyni-paper", "experiment-like"}) {
    const auto q = canonical_strategy(name);
    const double b = bell_value(q, ineq);
    SessionOptions opts;
    opts.keep_rounds = false;
    opts.outcome_seed = 2024;
    const auto log = run_session(instance, q, 10100, RandomnessSource::prng(2024), opts);
    std::printf("%-16s B = %.6f  P = %.6f  simulated %.4f +- %.4f\n", name, b, success_probability(b, ineq.gamma()),
                log.estimate, log.std_error);
  }

  OptimizerOptions opts;
  opts.seed = 7;
  opts.restarts = 8;
  const auto best = optimize(ineq, opts);
  std::printf("see-saw optimum      %.6f after %u sweeps\n", best.best_value, best.sweeps_used);
}
