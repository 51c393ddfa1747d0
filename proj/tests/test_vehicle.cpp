#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "racer/vehicle.hpp"

using namespace racer;

TEST_SUITE_BEGIN("vehicle");

TEST_CASE("straight line at constant speed") {
  const VehicleParams p;
  VehicleState s;
  s.heading = M_PI / 4.0;
  s.speed = 2.0;
  const Action a{2.0, 0.0};
  for (int i = 0; i < 50; ++i) s = step_vehicle(s, a, p);
  const double dist = 2.0 * 0.1 * 50;
  CHECK(s.position.x() == doctest::Approx(dist * std::cos(M_PI / 4.0)).epsilon(1e-12));
  CHECK(s.position.y() == doctest::Approx(dist * std::sin(M_PI / 4.0)).epsilon(1e-12));
  CHECK(s.heading == doctest::Approx(M_PI / 4.0));
  CHECK(s.speed == 2.0);
}

TEST_CASE("acceleration is rate limited") {
  const VehicleParams p;
  VehicleState s;
  const Action full{2.0, 0.0};
  s = step_vehicle(s, full, p);
  CHECK(s.speed == doctest::Approx(0.3).epsilon(1e-12));
  // From rest, one control period of max acceleration covers 16.5 mm.
  CHECK(s.position.x() == doctest::Approx(0.0165).epsilon(1e-9));
  for (int i = 0; i < 6; ++i) s = step_vehicle(s, full, p);
  CHECK(s.speed == doctest::Approx(2.0));
  // Braking obeys the same limit.
  s = step_vehicle(s, {0.0, 0.0}, p);
  CHECK(s.speed == doctest::Approx(1.7));
}

TEST_CASE("steering slews at the configured rate") {
  const VehicleParams p;
  VehicleState s;
  const Action turn{0.0, 0.434};
  s = step_vehicle(s, turn, p);
  CHECK(s.steering == doctest::Approx(0.32).epsilon(1e-12));
  s = step_vehicle(s, turn, p);
  CHECK(s.steering == doctest::Approx(0.434).epsilon(1e-12));
  s = step_vehicle(s, {0.0, -0.434}, p);
  CHECK(s.steering == doctest::Approx(0.434 - 0.32).epsilon(1e-9));
}

TEST_CASE("steady turn traces the bicycle turning radius") {
  const VehicleParams p;
  VehicleState s;
  s.speed = 2.0;
  const double steer = 0.3;
  const Action a{2.0, steer};
  // Let the steering converge before collecting the loop.
  for (int i = 0; i < 10; ++i) s = step_vehicle(s, a, p);
  std::vector<Vec2> pts;
  for (int i = 0; i < 60; ++i) {
    s = step_vehicle(s, a, p);
    pts.push_back(s.position);
  }
  // Least-squares circle (Kasa): minimize |p|^2 - 2 cx x - 2 cy y - c0.
  Eigen::MatrixXd A(pts.size(), 3);
  Eigen::VectorXd b(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    A(i, 0) = 2.0 * pts[i].x();
    A(i, 1) = 2.0 * pts[i].y();
    A(i, 2) = 1.0;
    b(i) = pts[i].squaredNorm();
  }
  const Eigen::Vector3d sol = A.colPivHouseholderQr().solve(b);
  const Vec2 center(sol[0], sol[1]);
  const double radius = std::sqrt(sol[2] + center.squaredNorm());
  double max_dev = 0.0;
  for (const Vec2& q : pts)
    max_dev = std::max(max_dev, std::abs((q - center).norm() - radius));

  const double expect = p.wheelbase / std::tan(steer);
  CHECK(radius == doctest::Approx(expect).epsilon(0.01));
  CHECK(max_dev < 0.005 * expect);  // circular, not just right on average
}

TEST_CASE("commands land after the delay") {
  const VehicleParams p;  // delay 1
  Vehicle v(p, VehicleState{});
  v.step({2.0, 0.0});  // null command from the prefill applies here
  CHECK(v.state().speed == 0.0);
  v.step({2.0, 0.0});
  CHECK(v.state().speed == doctest::Approx(0.3));

  VehicleParams slow = p;
  slow.command_delay = 3;
  Vehicle w(slow, VehicleState{});
  for (int i = 0; i < 3; ++i) {
    w.step({2.0, 0.0});
    CHECK(w.state().speed == 0.0);
  }
  w.step({2.0, 0.0});
  CHECK(w.state().speed == doctest::Approx(0.3));
}

TEST_CASE("commands are clamped to the actuator range") {
  const VehicleParams p;
  VehicleParams instant = p;
  instant.command_delay = 0;
  Vehicle v(instant, VehicleState{});
  for (int i = 0; i < 40; ++i) v.step({99.0, 2.0});
  CHECK(v.state().speed == doctest::Approx(p.max_speed));
  CHECK(v.state().steering == doctest::Approx(p.max_steer));
  for (int i = 0; i < 40; ++i) v.step({-1.0, -2.0});
  CHECK(v.state().speed == 0.0);
  CHECK(v.state().steering == doctest::Approx(-p.max_steer));
}

TEST_CASE("footprint sits ahead of the rear axle") {
  const VehicleParams p;
  VehicleState s;
  const OrientedRect r = vehicle_footprint(s, p);
  CHECK(r.center.x() == doctest::Approx(p.wheelbase / 2.0));
  CHECK(r.center.y() == 0.0);
  CHECK(r.half_length == doctest::Approx(0.25));
  CHECK(r.half_width == doctest::Approx(0.15));

  s.heading = M_PI / 2.0;
  s.position = {1.0, 1.0};
  const OrientedRect up = vehicle_footprint(s, p);
  CHECK(up.center.x() == doctest::Approx(1.0));
  CHECK(up.center.y() == doctest::Approx(1.0 + p.wheelbase / 2.0));
}

TEST_SUITE_END();
