#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mehler/levy_core.hpp"

namespace mehler::models {

struct ModelSpec {
    std::string name;
    LevyTriple triple;
    SemigroupFamily semigroup;
    EvolvedTriple evolved;
    std::function<double(double)> h;  // domination function
    double h_l1;                      // closed form of int_0^inf h
    std::map<std::string, double> known_constants;
    std::map<std::string, double> parameters;

    int dimension() const { return triple.dimension(); }
    bool has_gaussian_part() const { return !triple.Q.isZero(0.0); }
};

// tempered stable density c e^{-x^2} / |x|^{1+2s}, T_t = e^{-beta t}
ModelSpec build_koponen(double c = 1.0, double s = 0.75, double beta = 1.0, double b = 0.0);

// radial kernel r^{-1-alpha} on finitely many symmetric sphere atoms, T_t = e^{-beta t} I
ModelSpec build_alpha_stable(double alpha, double beta, std::vector<SphereAtom> atoms, Vector b);
// d = 1, atoms at +-1 with unit weight
ModelSpec build_alpha_stable_1d(double alpha = 1.5, double beta = 1.0, double b = 0.0);

// density c (det Q^{1/2})^{-1} |Q^{-1/2} y|^{-2s-d}, B symmetric negative, [Q,B] = 0, d <= 2
ModelSpec build_fractional_ou(const Matrix& Q, const Matrix& B, double s, double c = 1.0);
double fractional_ou_rate(const Matrix& B, double s);  // Tr B - (2s+d) Lambda, Lambda the top eigenvalue
bool fractional_ou_condition(const Matrix& B, double s);
// B = -Q^alpha with Q eigenvalues r: r_min > ((2s+d-1)^{-1} sum_{others} r_i^alpha)^{1/alpha}
bool fractional_ou_condition_power_case(const Vector& q_eigenvalues, double alpha, double s);

ModelSpec with_gaussian_part(const ModelSpec& model, const Matrix& Q);

// catalog defaults by name: koponen, alpha_stable, fractional_ou, optionally
// with parameter overrides (unknown parameter names are rejected)
ModelSpec build_named(const std::string& name, const std::map<std::string, double>& overrides = {});
std::vector<std::string> catalog_names();

}  // namespace mehler::models
