#include "bernwf/config_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace bernwf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::invalid_argument("config error at " + (path.empty() ? "/" : path) + ": " + msg);
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            fail(path + "/" + it.key(), "unknown key");
    }
}

double get_number(const json& j, const std::string& key, const std::string& path,
                  double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(path + "/" + key, "expected a number");
    return j.at(key).get<double>();
}

std::vector<Atom> get_atoms(const json& j, const std::string& key, const std::string& path) {
    std::vector<Atom> atoms;
    if (!j.contains(key)) return atoms;
    const json& arr = j.at(key);
    if (!arr.is_array()) fail(path + "/" + key, "expected an array of [location, weight] pairs");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& e = arr[i];
        std::ostringstream p;
        p << path << "/" << key << "/" << i;
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            fail(p.str(), "expected [location, weight]");
        atoms.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return atoms;
}

SelectionKernel selection_from_json(const json& j, const std::string& path) {
    reject_unknown_keys(j, {"kappa", "beta", "p"}, path);
    SelectionKernel sel;
    if (!j.contains("kappa") || !j.at("kappa").is_number_integer())
        fail(path + "/kappa", "expected an integer >= 2");
    sel.kappa = j.at("kappa").get<int>();
    if (!j.contains("beta") || !j.at("beta").is_array())
        fail(path + "/beta", "expected an array of kappa - 1 rates");
    sel.beta = j.at("beta").get<std::vector<double>>();
    if (!j.contains("p") || !j.at("p").is_array())
        fail(path + "/p", "expected an array of probability rows, one per ell = 2..kappa");
    for (std::size_t row = 0; row < j.at("p").size(); ++row) {
        const json& r = j.at("p")[row];
        if (!r.is_array()) {
            std::ostringstream p;
            p << path << "/p/" << row;
            fail(p.str(), "expected an array");
        }
        sel.p.push_back(r.get<std::vector<double>>());
    }
    auto bad = sel.validate();
    if (!bad.empty()) fail(path, bad.front());
    return sel;
}

}  // namespace

ModelParams model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail("", "config root must be an object");
    reject_unknown_keys(
        j, {"lambda0", "lambda_atoms", "mu_atoms", "nu_atoms", "theta_a", "theta_A", "selection"},
        "");
    ModelParams params;
    params.lambda0 = get_number(j, "lambda0", "", 0.0);
    try {
        params.lambda_tail = AtomicMeasure(get_atoms(j, "lambda_atoms", ""), Support::unit_half_open);
    } catch (const std::invalid_argument& e) {
        fail("/lambda_atoms", e.what());
    }
    try {
        params.mu = AtomicMeasure(get_atoms(j, "mu_atoms", ""), Support::signed_open);
    } catch (const std::invalid_argument& e) {
        fail("/mu_atoms", e.what());
    }
    try {
        params.nu = AtomicMeasure(get_atoms(j, "nu_atoms", ""), Support::signed_open);
    } catch (const std::invalid_argument& e) {
        fail("/nu_atoms", e.what());
    }
    params.theta_a = get_number(j, "theta_a", "", 0.0);
    params.theta_A = get_number(j, "theta_A", "", 0.0);
    if (j.contains("selection")) params.sel = selection_from_json(j.at("selection"), "/selection");
    params.validate();
    return params;
}

ModelParams model_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return model_from_json(j);
}

nlohmann::json model_to_json(const ModelParams& params) {
    json j;
    j["lambda0"] = params.lambda0;
    auto atoms_to_json = [](const AtomicMeasure& m) {
        json arr = json::array();
        for (const Atom& a : m.atoms()) arr.push_back({a.location, a.weight});
        return arr;
    };
    j["lambda_atoms"] = atoms_to_json(params.lambda_tail);
    j["mu_atoms"] = atoms_to_json(params.mu);
    j["nu_atoms"] = atoms_to_json(params.nu);
    j["theta_a"] = params.theta_a;
    j["theta_A"] = params.theta_A;
    j["selection"] = {{"kappa", params.sel.kappa}, {"beta", params.sel.beta}, {"p", params.sel.p}};
    return j;
}

std::string config_hash(const nlohmann::json& j) {
    std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace bernwf
