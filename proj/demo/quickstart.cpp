// Builds the three-species cascade in code, certifies the p-type loop and
// checks the certificate against a simulation.

#include <iostream>

#include "reinstab/certificates.hpp"
#include "reinstab/simulate.hpp"

int main() {
  using namespace reinstab;
  LinearNetwork net;
  net.a = Matrix(3, 3);
  net.a << -1.0, 0.0, 0.5,
            1.0, -1.0, 0.0,
            0.0, 1.0, -1.0;
  net.b0 = Vector::Zero(3);
  net.b0(0) = 1.0;

  PType ctrl;  // mu = theta = eta = kp = 1, so r = 1
  const StaticGains g = static_gains(net.a, net.b0);
  std::cout << "g0 = " << g.g0 << ", gn = " << g.gn << "\n";

  const Certificate cert = certify_ptype(net, ctrl);
  std::cout << "verdict: " << to_string(cert.verdict) << "\n";

  const ClosedLoop loop(net, ctrl);
  const Trajectory tr = integrate(loop, default_initial_state(loop), 200.0, 1e-8);
  const SettlingReport st = settling(tr, 2, ctrl.set_point());
  std::cout << "x3(200) = " << tr.back()(2) << ", settled: " << (st.settled ? "yes" : "no") << "\n";
  return cert.certified() && st.settled ? 0 : 1;
}
