#pragma once

#include "cocyclelab/cocycle.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cocyclelab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FunctionSpec {
    bool reality = false;
    double rho = 0.0;
    std::vector<std::array<double, 3>> coeffs;  // [k, re, im]

    TrigPolynomial to_polynomial() const;
};

// Plain-text model file:
//   [model]
//   lambda_a = 1
//   lambda_v = 10
//   omega = "golden"
//   [function.v]
//   reality = true
//   rho = 0.5
//   coeffs = [[1, 1, 0], [-1, 1, 0]]
// The a section is optional; omitting it means a == 1.
struct ModelFile {
    double lambda_a = 1.0;
    double lambda_v = 1.0;
    std::string omega = "golden";
    std::optional<FunctionSpec> v;
    std::optional<FunctionSpec> a;

    JacobiModel build(int cf_depth = 40) const;
};

ModelFile parse_model_file(const std::string& text);
std::string serialize_model_file(const ModelFile& mf);

ModelFile load_model_file(const std::string& path);

}  // namespace cocyclelab
