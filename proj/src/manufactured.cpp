#include <cmath>
#include <numbers>

#include "nsf/solver.hpp"

namespace nsf::solver {

ManufacturedSolution::ManufacturedSolution(double length, Params params) : params_(params) {
  if (!(length > 0.0)) throw ArgumentError("manufactured solution needs L > 0");
  if (params.mode < 1) throw ArgumentError("manufactured solution mode must be >= 1");
  // cos(kx) stays >= -1, so rho0, theta0 > 1 keep the fields positive.
  if (!(params.rho0 > 1.0) || !(params.theta0 > 1.0)) {
    throw ArgumentError("manufactured solution needs rho0 > 1 and theta0 > 1");
  }
  k_ = 2.0 * std::numbers::pi * params.mode / length;
}

ManufacturedSolution::Fields ManufacturedSolution::fields(double t, double x) const {
  const double c = std::cos(k_ * x);
  const double s = std::sin(k_ * x);
  const double ct = std::cos(t);
  const double st = std::sin(t);
  const double a = params_.velocity_amplitude;
  Fields f{};
  f.rho = params_.rho0 + c * ct;
  f.u = a * s * st;
  f.theta = params_.theta0 + c * ct;
  f.rho_t = -c * st;
  f.u_t = a * s * ct;
  f.theta_t = -c * st;
  f.rho_x = -k_ * s * ct;
  f.u_x = a * k_ * c * st;
  f.theta_x = -k_ * s * ct;
  f.u_xx = -a * k_ * k_ * s * st;
  f.theta_xx = -k_ * k_ * c * ct;
  return f;
}

std::array<double, 3> ManufacturedSolution::source(const thermo::ThermoClosure& closure, double t,
                                                   double x) const {
  const Fields f = fields(t, x);
  const thermo::EosEval ev = thermo::eos_eval(closure, {f.rho, f.theta});
  const thermo::Transport tr = thermo::transport(closure, f.theta);

  const double p_x = ev.dp_drho * f.rho_x + ev.dp_dtheta * f.theta_x;
  const double e_t = ev.de_drho * f.rho_t + ev.de_dtheta * f.theta_t;
  const double e_x = ev.de_drho * f.rho_x + ev.de_dtheta * f.theta_x;

  const double stress = (4.0 / 3.0) * tr.mu * f.u_x;
  const double stress_x = (4.0 / 3.0) * (tr.dmu_dtheta * f.theta_x * f.u_x + tr.mu * f.u_xx);
  const double heat_div = tr.dkappa_dtheta * f.theta_x * f.theta_x + tr.kappa * f.theta_xx;

  const double q_mass = f.rho_t + f.rho_x * f.u + f.rho * f.u_x;
  const double q_mom = f.rho_t * f.u + f.rho * f.u_t + f.rho_x * f.u * f.u +
                       2.0 * f.rho * f.u * f.u_x + p_x - stress_x;

  const double E = f.rho * (ev.e + 0.5 * f.u * f.u);
  const double E_t = f.rho_t * ev.e + f.rho * e_t + 0.5 * f.rho_t * f.u * f.u + f.rho * f.u * f.u_t;
  const double E_x = f.rho_x * ev.e + f.rho * e_x + 0.5 * f.rho_x * f.u * f.u + f.rho * f.u * f.u_x;
  const double q_energy = E_t + (E_x + p_x) * f.u + (E + ev.p) * f.u_x -
                          (stress_x * f.u + stress * f.u_x) - heat_div;
  return {q_mass, q_mom, q_energy};
}

}  // namespace nsf::solver
