#pragma once

#include <span>

#include "cqed/model.hpp"
#include "cqed/state.hpp"

namespace cqed {

/// Rates of the non-Hermitian generator in units of kappa.
struct GeneratorRates {
  double kappa{1.0};
  double gamma{0.0};
  double drive{0.0};
  double delta_c{0.0};
  double delta_a{0.0};
};

GeneratorRates generator_rates(const EngineRates& r);

/// out = K c for K = E(a^+ - a) + sum_j (g_j a^+ s_j- - g_j^* a s_j+)
///                  - (kappa + i dc) a^+a - (gamma/2 + i da) sum_j s_j+ s_j-,
/// projected on the truncated basis of `level` quanta. `out` is reshaped.
template <class G>
void derivative(const Amplitudes& c, std::span<const G> g, const GeneratorRates& rates, int level,
                Amplitudes& out);

extern template void derivative<double>(const Amplitudes&, std::span<const double>, const GeneratorRates&,
                                        int, Amplitudes&);
extern template void derivative<Complex>(const Amplitudes&, std::span<const Complex>,
                                         const GeneratorRates&, int, Amplitudes&);

/// Classical fourth-order Runge-Kutta on the unnormalized flow; owns scratch buffers.
class Rk4 {
 public:
  template <class G>
  void step(TruncatedState& state, std::span<const G> g, const GeneratorRates& rates, double dt);

 private:
  Amplitudes k_;
  Amplitudes stage_;
  Amplitudes acc_;
};

extern template void Rk4::step<double>(TruncatedState&, std::span<const double>, const GeneratorRates&,
                                       double);
extern template void Rk4::step<Complex>(TruncatedState&, std::span<const Complex>, const GeneratorRates&,
                                        double);

}  // namespace cqed
