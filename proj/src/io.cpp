#include "ppcp/io.hpp"

#include <stdexcept>

namespace ppcp {

using nlohmann::json;

json pattern_to_json(const PointPattern& pat) {
    json j;
    if (const auto* d = std::get_if<Disk>(&pat.window)) {
        j["window"] = {{"type", "disk"}, {"center", {d->center.x, d->center.y}}, {"radius", d->radius}};
    } else {
        const auto& r = std::get<Rect>(pat.window);
        j["window"] = {{"type", "rect"}, {"min", {r.x_min, r.y_min}}, {"max", {r.x_max, r.y_max}}};
    }
    j["points"] = json::array();
    for (const Point& p : pat.points) {
        j["points"].push_back({p.x, p.y});
    }
    j["marks"] = json::array();
    for (const Mark& m : pat.marks) {
        json mark = {{"cluster_id", m.cluster_id}, {"is_transmitter", m.is_transmitter}};
        if (m.fading > 0.0) {
            mark["fading"] = m.fading;
        }
        j["marks"].push_back(mark);
    }
    if (pat.origin_index) {
        j["origin_index"] = *pat.origin_index;
    }
    return j;
}

PointPattern pattern_from_json(const json& j) {
    PointPattern pat;
    const json& w = j.at("window");
    if (w.at("type") == "disk") {
        pat.window = Disk{{w.at("center").at(0).get<double>(), w.at("center").at(1).get<double>()},
                          w.at("radius").get<double>()};
    } else if (w.at("type") == "rect") {
        pat.window = Rect{w.at("min").at(0).get<double>(), w.at("min").at(1).get<double>(),
                          w.at("max").at(0).get<double>(), w.at("max").at(1).get<double>()};
    } else {
        throw std::invalid_argument("pattern window type must be disk or rect");
    }
    for (const auto& p : j.at("points")) {
        pat.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (j.contains("marks")) {
        for (const auto& m : j.at("marks")) {
            pat.marks.push_back(Mark{m.at("cluster_id").get<std::int64_t>(), m.at("is_transmitter").get<bool>(),
                                     m.value("fading", 0.0)});
        }
    }
    if (!pat.marks.empty() && pat.marks.size() != pat.points.size()) {
        throw std::invalid_argument("pattern marks must parallel points");
    }
    if (j.contains("origin_index")) {
        const auto idx = j.at("origin_index").get<std::size_t>();
        if (idx >= pat.points.size() || !(pat.points[idx] == Point{0.0, 0.0})) {
            throw std::invalid_argument("origin_index must point at (0, 0)");
        }
        pat.origin_index = idx;
    }
    return pat;
}

json kernel_to_json(const OffspringKernel& k) {
    if (const auto* t = std::get_if<Thomas>(&k.variant())) {
        return {{"type", "thomas"}, {"sigma2", t->sigma2}};
    }
    return {{"type", "matern"}, {"radius", std::get<Matern>(k.variant()).radius}};
}

OffspringKernel kernel_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "thomas") {
        return OffspringKernel::thomas(j.at("sigma2").get<double>());
    }
    if (type == "matern") {
        return OffspringKernel::matern(j.at("radius").get<double>());
    }
    throw std::invalid_argument("kernel type must be thomas or matern");
}

}  // namespace ppcp
