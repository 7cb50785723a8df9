#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sasaki/expr.hpp"
#include "sasaki/manifold.hpp"

namespace sasaki {

struct OdeParams {
    double delta1 = 0.0;
    double delta2 = 1.0;
    double lambda = 0.0;
};

/// Closed-form family in the problem's variable with free constants c1..c4
/// and, where needed, lambda.
struct SolutionFamily {
    std::string name;
    std::string expression;
    Interval validity;
    /// Parameter sets for which the family is claimed to solve the ODE.
    std::function<bool(const OdeParams&)> applies = [](const OdeParams&) { return true; };

    /// The family member as expression text with the constants substituted.
    std::string instantiate(std::span<const double> c, const OdeParams& params) const;
};

/// Scalar ODE for the profile f of xi = f e1; residual = lhs - rhs evaluated
/// from d[k] = f^(k)(x), k = 0..4.
struct OdeProblem {
    std::string name;
    std::string text;
    std::string variable;
    int order = 4;
    std::function<double(std::span<const double> d, double x, const OdeParams&)> residual;
    std::vector<SolutionFamily> families;
};

/// Registered problems:
///   polar-harmonic, polar-biharmonic (profile in r on polar-r2);
///   hyperbolic-harmonic, hyperbolic-biharmonic-stated, hyperbolic-biharmonic,
///   hyperbolic-sesqui-stated, hyperbolic-sesqui (profile in x on hyperbolic-r4);
///   exp-harmonic, exp-biharmonic, exp-sesqui (profile in x on exp-r2).
/// The "-stated" variants carry +2f^3 on the right-hand side as published; the
/// plain ones carry the sign that the bitension of f e1 actually produces.
const std::vector<OdeProblem>& ode_problems();
const OdeProblem& ode_problem(const std::string& name);

/// Derivatives f^(k)(x), k = 0..order, of a one-variable expression.
std::vector<double> profile_derivatives(const Expr& f, double x, int order, std::span<const double> param_values = {});

double ode_residual(const OdeProblem& problem, const Expr& f, double x, const OdeParams& params,
                    std::span<const double> param_values = {});
/// Same, for expression text in the problem's variable.
double ode_residual(const OdeProblem& problem, const std::string& f, double x, const OdeParams& params);

struct ExampleRow {
    std::string claim;
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string detail;
};

struct ExampleReport {
    std::string name;
    std::string manifold;
    std::size_t points = 0;
    std::vector<ExampleRow> rows;

    bool all_pass() const;
};

/// Names accepted by reproduce_example: 4.1, 4.2, 5.3, 5.4.
const std::vector<std::string>& example_names();

/// Every claim of the named example as a checked row. `per_axis` sets the
/// sample grid over the manifold's domain (5 for the planes, 3 per axis in
/// dimension four unless overridden).
ExampleReport reproduce_example(const std::string& name, int per_axis = 0);

}  // namespace sasaki
