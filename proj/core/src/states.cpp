#include "phdae/states.hpp"

namespace phdae {

Vec12 FullState::electrical() const {
    Vec12 x;
    x << psi_dot, psi;
    return x;
}

Vec12 FullState::mechanical() const {
    Vec12 x;
    x << theta_dot, theta;
    return x;
}

void FullState::set_electrical(const Vec12& xe) {
    psi_dot = xe.head<6>();
    psi = xe.tail<6>();
}

void FullState::set_mechanical(const Vec12& xm) {
    theta_dot = xm.head<6>();
    theta = xm.tail<6>();
}

Vec16 ReducedState::differential() const {
    Vec16 x;
    x << psi_t, theta_dot, theta;
    return x;
}

void ReducedState::set_differential(const Vec16& x) {
    psi_t = x.head<4>();
    theta_dot = x.segment<6>(4);
    theta = x.tail<6>();
}

ReducedState reduce_state(const FullState& s) {
    ReducedState r;
    r.psi_t_dot << s.psi_dot[0], s.psi_dot[1], s.psi_dot[4], s.psi_dot[5];
    r.psi_t << s.psi[0], s.psi[1], s.psi[4], s.psi[5];
    r.theta_dot = s.theta_dot;
    r.theta = s.theta;
    r.t = s.t;
    return r;
}

} // namespace phdae
