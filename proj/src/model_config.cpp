#include "cocyclelab/model_config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace cocyclelab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

TrigPolynomial FunctionSpec::to_polynomial() const {
    if (!(rho > 0.0)) throw ConfigError("function: missing or non-positive rho");
    int degree = 0;
    for (const auto& c : coeffs) {
        const double k = c[0];
        if (k != std::floor(k)) throw ConfigError("function: non-integer frequency");
        degree = std::max(degree, static_cast<int>(std::abs(k)));
    }
    std::vector<Complex> flat(static_cast<std::size_t>(2 * degree + 1));
    for (const auto& c : coeffs) {
        const int k = static_cast<int>(c[0]);
        flat[static_cast<std::size_t>(k + degree)] += Complex(c[1], c[2]);
    }
    TrigPolynomial p(std::move(flat), rho);
    if (reality && !p.real_on_axis())
        throw ConfigError("function: reality = true but coefficients are not conjugate-symmetric");
    return p;
}

ModelFile parse_model_file(const std::string& text) {
    ModelFile mf;
    std::string section;
    FunctionSpec* fn = nullptr;

    std::istringstream lines(text);
    std::string raw;
    while (std::getline(lines, raw)) {
        // allow ';' as an in-line statement separator
        std::istringstream stmts(raw);
        std::string stmt;
        while (std::getline(stmts, stmt, ';')) {
            stmt = trim(stmt);
            if (stmt.empty() || stmt[0] == '#') continue;
            if (stmt.front() == '[') {
                if (stmt.back() != ']') throw ConfigError("malformed section header: " + stmt);
                section = stmt.substr(1, stmt.size() - 2);
                if (section == "function.v") {
                    mf.v.emplace();
                    fn = &*mf.v;
                } else if (section == "function.a") {
                    mf.a.emplace();
                    fn = &*mf.a;
                } else if (section == "model") {
                    fn = nullptr;
                } else {
                    throw ConfigError("unknown section: " + section);
                }
                continue;
            }
            const auto eq = stmt.find('=');
            if (eq == std::string::npos) throw ConfigError("expected key = value: " + stmt);
            const std::string key = trim(stmt.substr(0, eq));
            const std::string value = trim(stmt.substr(eq + 1));
            try {
                if (section == "model") {
                    if (key == "lambda_a")
                        mf.lambda_a = std::stod(value);
                    else if (key == "lambda_v" || key == "lambda_s")
                        mf.lambda_v = std::stod(value);
                    else if (key == "omega")
                        mf.omega = unquote(value);
                    else
                        throw ConfigError("unknown model key: " + key);
                } else if (fn != nullptr) {
                    if (key == "reality")
                        fn->reality = (value == "true" || value == "1");
                    else if (key == "rho")
                        fn->rho = std::stod(value);
                    else if (key == "coeffs") {
                        const auto arr = nlohmann::json::parse(value);
                        for (const auto& row : arr) {
                            if (!row.is_array() || row.size() != 3)
                                throw ConfigError("coeffs rows must be [k, re, im]");
                            fn->coeffs.push_back({row[0].get<double>(), row[1].get<double>(),
                                                  row[2].get<double>()});
                        }
                    } else {
                        throw ConfigError("unknown function key: " + key);
                    }
                } else {
                    throw ConfigError("key outside any section: " + key);
                }
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("bad coeffs array: ") + e.what());
            } catch (const std::invalid_argument&) {
                throw ConfigError("bad numeric value for " + key + ": " + value);
            }
        }
    }
    if (!mf.v) throw ConfigError("model file must define [function.v]");
    return mf;
}

std::string serialize_model_file(const ModelFile& mf) {
    std::ostringstream out;
    out.precision(17);
    out << "[model]\n";
    out << "lambda_a = " << mf.lambda_a << "\n";
    out << "lambda_v = " << mf.lambda_v << "\n";
    out << "omega = \"" << mf.omega << "\"\n";
    auto emit = [&out](const char* name, const FunctionSpec& fn) {
        out << "[function." << name << "]\n";
        out << "reality = " << (fn.reality ? "true" : "false") << "\n";
        out << "rho = " << fn.rho << "\n";
        out << "coeffs = [";
        for (std::size_t i = 0; i < fn.coeffs.size(); ++i) {
            const auto& c = fn.coeffs[i];
            out << (i ? ", " : "") << "[" << c[0] << ", " << c[1] << ", " << c[2] << "]";
        }
        out << "]\n";
    };
    if (mf.v) emit("v", *mf.v);
    if (mf.a) emit("a", *mf.a);
    return out.str();
}

JacobiModel ModelFile::build(int cf_depth) const {
    if (!v) throw ConfigError("model: missing potential v");
    TrigPolynomial pv = v->to_polynomial();
    if (!pv.real_on_axis()) throw ConfigError("model: v must be real on the real axis");
    CFExpansion cf;
    try {
        cf = resolve_omega(omega, cf_depth);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model: cannot resolve omega '") + omega + "': " + e.what());
    }
    try {
        TrigPolynomial pa =
            a ? a->to_polynomial() : TrigPolynomial::constant(1.0, pv.rho());
        return JacobiModel(lambda_a, std::move(pa), lambda_v, std::move(pv), std::move(cf));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_file(buf.str());
}

}  // namespace cocyclelab
