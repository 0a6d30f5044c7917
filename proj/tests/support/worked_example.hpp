#pragma once

// The two-degree-of-freedom worked example shared by unit and acceptance
// tests: G = (I, Kx, 1/2 x^T diag(R1, R2) x) with K = [3/2, i/2, 1, i],
// R1 = [[2, 1/2], [1/2, 3]], R2 = I.

#include "lqsn/oscillator.hpp"

namespace testsupport {

inline lqsn::CMat worked_K1() {
  lqsn::CMat k(1, 2);
  k << lqsn::Complex(1.5, 0.0), lqsn::Complex(0.0, 0.5);
  return k;
}

inline lqsn::CMat worked_K2() {
  lqsn::CMat k(1, 2);
  k << lqsn::Complex(1.0, 0.0), lqsn::Complex(0.0, 1.0);
  return k;
}

inline lqsn::RMat worked_R1() {
  lqsn::RMat r(2, 2);
  r << 2.0, 0.5, 0.5, 3.0;
  return r;
}

inline lqsn::RMat worked_R2() { return lqsn::RMat::Identity(2, 2); }

inline lqsn::OscillatorParams worked_system() {
  lqsn::OscillatorParams g;
  g.n = 2;
  g.m = 1;
  g.S = lqsn::CMat::Identity(1, 1);
  g.K = lqsn::CMat(1, 4);
  g.K << lqsn::Complex(1.5, 0.0), lqsn::Complex(0.0, 0.5), lqsn::Complex(1.0, 0.0),
      lqsn::Complex(0.0, 1.0);
  g.R = lqsn::block_diag(worked_R1(), worked_R2());
  return g;
}

/// The single direct-coupling block 1/2 [[0, -1], [3, 0]] of x2^T C x1.
inline lqsn::RMat worked_coupling() {
  lqsn::RMat c(2, 2);
  c << 0.0, -0.5, 1.5, 0.0;
  return c;
}

/// The drift matrix of the worked system (verified exactly in tests).
inline lqsn::RMat worked_A() {
  lqsn::RMat a(4, 4);
  a << -0.5,  6.0, -1.0,  0.0,
       -4.0, -2.5,  0.0, -3.0,
       -3.0,  0.0, -2.0,  2.0,
        0.0, -1.0, -2.0, -2.0;
  return a;
}

}  // namespace testsupport
