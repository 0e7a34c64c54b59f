#include "stochnewton/json_io.hpp"

#include <fstream>

#include "stochnewton/errors.hpp"

namespace stochnewton {

using nlohmann::json;

LambdaMeasure measure_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw BadConfig("measure config must be an object with a 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    std::uint64_t seed = j.value("seed", 0ULL);
    if (kind == "uniform_disk") {
        double radius = j.value("radius", 0.75);
        cplx center(1.0, 0.0);
        if (j.contains("center")) {
            auto c = j.at("center");
            center = cplx(c.at(0).get<double>(), c.at(1).get<double>());
        }
        return LambdaMeasure::uniform_disk(radius, seed, center);
    }
    if (kind == "uniform_annulus") {
        return LambdaMeasure::uniform_annulus(j.value("inner", 0.5),
                                              j.value("outer", 0.9), seed);
    }
    if (kind == "finite") {
        std::vector<LambdaMeasure::Atom> atoms;
        for (const auto& entry : j.at("atoms")) {
            const auto& pos = entry.at(0);
            atoms.push_back(LambdaMeasure::Atom{
                cplx(pos.at(0).get<double>(), pos.at(1).get<double>()),
                entry.at(1).get<double>()});
        }
        return LambdaMeasure::finite_support(std::move(atoms), seed);
    }
    throw BadConfig("unknown measure kind '" + kind + "'");
}

json measure_to_json(const LambdaMeasure& m) {
    json j;
    j["seed"] = m.seed_base();
    switch (m.kind()) {
        case LambdaMeasure::Kind::UniformDisk:
            j["kind"] = "uniform_disk";
            j["radius"] = m.radius();
            j["center"] = {m.center().real(), m.center().imag()};
            break;
        case LambdaMeasure::Kind::UniformAnnulus:
            j["kind"] = "uniform_annulus";
            j["inner"] = m.inner_radius();
            j["outer"] = m.radius();
            break;
        case LambdaMeasure::Kind::FiniteSupport: {
            j["kind"] = "finite";
            json atoms = json::array();
            for (const auto& a : m.atoms())
                atoms.push_back(
                    {{a.lambda.real(), a.lambda.imag()}, a.prob});
            j["atoms"] = atoms;
            break;
        }
    }
    return j;
}

Polynomial polynomial_from_json(const json& j) {
    if (j.is_string())
        return Polynomial::parse(j.get<std::string>());
    if (!j.is_array())
        throw BadConfig("polynomial JSON must be a string or [re,im] array");
    std::vector<cplx> coeffs;
    for (const auto& pair : j) {
        if (pair.is_number()) {
            coeffs.emplace_back(pair.get<double>(), 0.0);
        } else {
            coeffs.emplace_back(pair.at(0).get<double>(),
                                pair.at(1).get<double>());
        }
    }
    return Polynomial(std::move(coeffs));
}

json polynomial_to_json(const Polynomial& p) {
    json arr = json::array();
    for (cplx c : p.coeffs()) arr.push_back({c.real(), c.imag()});
    return arr;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for hashing");
    std::uint64_t h = 1469598103934665603ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a64_append(h, buf, static_cast<std::size_t>(in.gcount()));
        if (!in) break;
    }
    return h;
}

}  // namespace stochnewton
