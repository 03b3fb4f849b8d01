#pragma once

#include "latbose/errors.hpp"
#include "latbose/lattice.hpp"

// Lattices shared by the test programs.
namespace latbose::testing {

inline LatticeModel cubic(double U = 4.0, double t = 1.0) {
  return LatticeModel(Mat3::Identity(), {{{1, 0, 0}, t}, {{0, 1, 0}, t}, {{0, 0, 1}, t}}, U);
}

inline LatticeModel anisotropic(double t1, double t2, double t3, double U = 4.0) {
  return LatticeModel(Mat3::Identity(), {{{1, 0, 0}, t1}, {{0, 1, 0}, t2}, {{0, 0, 1}, t3}}, U);
}

/// A = diag(1, 2, 3) with weights 1/|a_i|^2.
inline LatticeModel orthorhombic(double U = 4.0) {
  Mat3 A = Mat3::Zero();
  A.diagonal() << 1.0, 2.0, 3.0;
  return LatticeModel(A, {{{1, 0, 0}, 1.0}, {{0, 1, 0}, 0.25}, {{0, 0, 1}, 1.0 / 9.0}}, U);
}

inline LatticeModel cubic_nnn(double U = 4.0) {
  return LatticeModel(Mat3::Identity(),
                      {{{1, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}, {{0, 0, 1}, 1.0}, {{1, 1, 0}, 0.5}},
                      U);
}

/// Face-centred cubic geometry with nearest neighbours along the primitive vectors
/// and one extra channel a1 - a2.
inline LatticeModel fcc_like(double U = 4.0) {
  Mat3 A;
  A << 0.0, 0.5, 0.5,
       0.5, 0.0, 0.5,
       0.5, 0.5, 0.0;
  return LatticeModel(A, {{{1, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}, {{0, 0, 1}, 1.0}, {{1, -1, 0}, 1.0}},
                      U);
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return static_cast<ErrorKind>(-1);
}

}  // namespace latbose::testing
