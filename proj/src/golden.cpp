#include "ixt/golden.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "ixt/errors.hpp"
#include "ixt/kernel.hpp"
#include "ixt/specfun.hpp"
#include "ixt/transforms.hpp"
#include "ixt/wedge.hpp"

namespace ixt::golden {
namespace {

using nlohmann::json;

double decimal(const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
        throw IoError("golden: not a decimal number: '" + text + "'");
    return v;
}

double input(const GoldenEntry& e, const std::string& name) {
    auto it = e.inputs.find(name);
    if (it == e.inputs.end()) throw DomainError("golden: op " + e.op + " lacks input '" + name + "'");
    return decimal(it->second);
}

using Evaluator = std::function<double(const GoldenEntry&)>;

const std::unordered_map<std::string, Evaluator>& evaluators() {
    using namespace std::complex_literals;
    static const std::unordered_map<std::string, Evaluator> table = {
        {"gamma", [](const GoldenEntry& e) { return specfun::gamma(input(e, "x")).real(); }},
        {"log_gamma_re",
         [](const GoldenEntry& e) {
             return specfun::log_gamma({input(e, "re"), input(e, "im")}).real();
         }},
        {"log_gamma_im",
         [](const GoldenEntry& e) {
             return specfun::log_gamma({input(e, "re"), input(e, "im")}).imag();
         }},
        {"beta", [](const GoldenEntry& e) { return specfun::beta(input(e, "a"), input(e, "b")); }},
        {"macdonald_imag_order",
         [](const GoldenEntry& e) {
             return specfun::macdonald_imag_order(input(e, "tau"), input(e, "z")).value;
         }},
        {"bessel_j_imag_order_re",
         [](const GoldenEntry& e) {
             return specfun::bessel_j_imag_order(input(e, "tau"), input(e, "z")).value.real();
         }},
        {"bessel_j_imag_order_im",
         [](const GoldenEntry& e) {
             return specfun::bessel_j_imag_order(input(e, "tau"), input(e, "z")).value.imag();
         }},
        {"macdonald_complex_re",
         [](const GoldenEntry& e) {
             return specfun::macdonald_complex_arg(input(e, "nu"), {input(e, "re"), input(e, "im")})
                 .value.real();
         }},
        {"macdonald_complex_im",
         [](const GoldenEntry& e) {
             return specfun::macdonald_complex_arg(input(e, "nu"), {input(e, "re"), input(e, "im")})
                 .value.imag();
         }},
        {"psi",
         [](const GoldenEntry& e) { return kernel::psi_auto(input(e, "tau"), input(e, "x")).value; }},
        {"phi",
         [](const GoldenEntry& e) { return kernel::phi_direct(input(e, "tau"), input(e, "x")).value; }},
        {"psi_derivative_x",
         [](const GoldenEntry& e) {
             const double order = input(e, "order");
             if (order != std::round(order)) throw DomainError("golden: order must be an integer");
             return kernel::psi_derivative_x(input(e, "tau"), input(e, "x"), static_cast<int>(order))
                 .value;
         }},
        {"phi_derivative_x",
         [](const GoldenEntry& e) {
             return kernel::phi_derivative_x(input(e, "tau"), input(e, "x")).value;
         }},
        {"forward_F.zero_mean",
         [](const GoldenEntry& e) {
             return transforms::forward_F(transforms::canonical::zero_mean(), input(e, "tau")).value;
         }},
        {"adjoint_G.gaussian_index",
         [](const GoldenEntry& e) {
             return transforms::adjoint_G(transforms::canonical::gaussian_index(), input(e, "x")).value;
         }},
        {"wedge_u.gaussian_index",
         [](const GoldenEntry& e) {
             const wedge::WedgeParams params{1.4, transforms::canonical::gaussian_index()};
             return wedge::wedge_u(params, {input(e, "r"), input(e, "theta")}).value;
         }},
    };
    return table;
}

const std::set<std::string>& specfun_ops() {
    static const std::set<std::string> ops = {
        "gamma", "log_gamma_re", "log_gamma_im", "beta", "macdonald_imag_order",
        "bessel_j_imag_order_re", "bessel_j_imag_order_im", "macdonald_complex_re",
        "macdonald_complex_im"};
    return ops;
}

}  // namespace

GoldenFile parse(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& ex) {
        throw IoError(std::string("golden: malformed JSON: ") + ex.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("schema_version"))
            throw IoError("golden: missing schema_version");
        GoldenFile file;
        file.schema_version = doc.at("schema_version").get<int>();
        if (file.schema_version != kSchemaVersion)
            throw IoError("golden: unsupported schema_version " + std::to_string(file.schema_version));
        file.precision_digits = doc.at("precision_digits").get<int>();
        for (const auto& item : doc.at("entries")) {
            GoldenEntry e;
            e.op = item.at("op").get<std::string>();
            for (const auto& [name, v] : item.at("inputs").items()) e.inputs[name] = v.get<std::string>();
            e.value = item.at("value").get<std::string>();
            decimal(e.value);
            file.entries.push_back(std::move(e));
        }
        return file;
    } catch (const json::exception& ex) {
        throw IoError(std::string("golden: schema violation: ") + ex.what());
    }
}

std::string serialize(const GoldenFile& file) {
    json doc;
    doc["schema_version"] = file.schema_version;
    doc["precision_digits"] = file.precision_digits;
    doc["entries"] = json::array();
    for (const auto& e : file.entries) {
        json inputs = json::object();
        for (const auto& [name, v] : e.inputs) inputs[name] = v;
        doc["entries"].push_back({{"op", e.op}, {"inputs", inputs}, {"value", e.value}});
    }
    return doc.dump(2) + "\n";
}

GoldenFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("golden: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

double evaluate(const GoldenEntry& entry) {
    const auto& table = evaluators();
    auto it = table.find(entry.op);
    if (it == table.end()) throw DomainError("golden: unknown op '" + entry.op + "'");
    return it->second(entry);
}

double tolerance(const std::string& op) { return specfun_ops().count(op) ? 1e-12 : 1e-10; }

std::vector<GoldenCheck> check(const GoldenFile& file) {
    std::vector<GoldenCheck> out;
    out.reserve(file.entries.size());
    for (const auto& e : file.entries) {
        GoldenCheck c;
        c.entry = e;
        c.expected = decimal(e.value);
        c.tolerance = tolerance(e.op);
        try {
            c.computed = evaluate(e);
            c.abs_error = std::abs(c.computed - c.expected);
            c.pass = c.abs_error <= c.tolerance;
        } catch (const std::exception& ex) {
            c.error = ex.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace ixt::golden
