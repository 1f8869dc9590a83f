#include "conclab/model.hpp"

#include <cmath>
#include <numbers>

#include "conclab/errors.hpp"

namespace conclab {

bool is_real_family(Family f) { return f != Family::ComplexProjective; }

std::string family_name(Family f) {
    switch (f) {
        case Family::Sphere: return "sphere";
        case Family::RealProjective: return "rp";
        case Family::ComplexProjective: return "cp";
    }
    return "?";
}

ManifoldModel::ManifoldModel(Family family, int n) : family_(family), n_(n) {
    if (n < 1) throw UsageError("model index must be at least 1, got " + std::to_string(n));
}

ManifoldModel ManifoldModel::parse(const std::string& designator) {
    const auto colon = designator.find(':');
    if (colon == std::string::npos) {
        throw UsageError("bad model designator '" + designator + "' (want sphere:<n>, rp:<n> or cp:<n>)");
    }
    const std::string name = designator.substr(0, colon);
    const std::string idx = designator.substr(colon + 1);
    Family family;
    if (name == "sphere") {
        family = Family::Sphere;
    } else if (name == "rp") {
        family = Family::RealProjective;
    } else if (name == "cp") {
        family = Family::ComplexProjective;
    } else {
        throw UsageError("unknown model family '" + name + "'");
    }
    int n = 0;
    try {
        std::size_t pos = 0;
        n = std::stoi(idx, &pos);
        if (pos != idx.size()) throw std::invalid_argument(idx);
    } catch (const std::exception&) {
        throw UsageError("bad model index '" + idx + "' in designator '" + designator + "'");
    }
    return ManifoldModel(family, n);
}

std::string ManifoldModel::designator() const {
    return family_name(family_) + ":" + std::to_string(n_);
}

int ManifoldModel::real_dim() const {
    return family_ == Family::ComplexProjective ? 2 * n_ : n_;
}

double ManifoldModel::curvature_floor() const {
    return family_ == Family::ComplexProjective ? 0.25 : 1.0;
}

double ManifoldModel::ricci_floor() const {
    return (real_dim() - 1) * curvature_floor();
}

double ManifoldModel::diameter() const {
    return family_ == Family::RealProjective ? std::numbers::pi / 2 : std::numbers::pi;
}

int ManifoldModel::max_tg_dim() const {
    return family_ == Family::ComplexProjective ? 2 * n_ - 2 : n_ - 1;
}

}  // namespace conclab
