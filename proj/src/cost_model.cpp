#include "mortonrrt/cost_model.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

namespace mrrt {

using nlohmann::json;

std::string_view to_string(OpKind k)
{
    switch (k) {
    case OpKind::Sample:
        return "sample";
    case OpKind::Steer:
        return "steer";
    case OpKind::NnNodeVisit:
        return "nn_node_visit";
    case OpKind::ObstacleTest:
        return "obstacle_test";
    case OpKind::StoreLookup:
        return "store_lookup";
    case OpKind::StoreUpdate:
        return "store_update";
    }
    return "?";
}

std::string_view to_string(StoreBackend b)
{
    return b == StoreBackend::Software ? "software" : "hardware";
}

void CostModel::validate() const
{
    for (double c : {sample, steer, nn_node_visit, obstacle_test, sw_store_op, hw_store_latency}) {
        if (!(c >= 0.0)) {
            throw std::invalid_argument("cost model: costs must be >= 0");
        }
    }
    if (!(cpi > 0.0)) {
        throw std::invalid_argument("cost model: cpi must be > 0");
    }
    if (hw_store_op != 1.0) {
        throw std::invalid_argument("cost model: a hardware store op is one instruction");
    }
}

double CostModel::unit_ops(OpKind k, StoreBackend backend) const
{
    switch (k) {
    case OpKind::Sample:
        return sample;
    case OpKind::Steer:
        return steer;
    case OpKind::NnNodeVisit:
        return nn_node_visit;
    case OpKind::ObstacleTest:
        return obstacle_test;
    case OpKind::StoreLookup:
    case OpKind::StoreUpdate:
        return backend == StoreBackend::Software ? sw_store_op : hw_store_op;
    }
    return 0.0;
}

double CostModel::ops(const OpCounts& c, StoreBackend backend) const
{
    double total = 0.0;
    for (std::size_t i = 0; i < kOpKindCount; ++i) {
        const auto k = static_cast<OpKind>(i);
        total += static_cast<double>(c[k]) * unit_ops(k, backend);
    }
    return total;
}

double CostModel::store_ops(const OpCounts& c, StoreBackend backend) const
{
    return static_cast<double>(c.store_ops()) * unit_ops(OpKind::StoreLookup, backend);
}

double CostModel::cycles(const OpCounts& c, StoreBackend backend) const
{
    const double other = ops(c, backend) - store_ops(c, backend);
    const double store = backend == StoreBackend::Software
                             ? store_ops(c, backend) * cpi
                             : static_cast<double>(c.store_ops()) * hw_store_latency;
    return other * cpi + store;
}

namespace {

struct Field
{
    const char* key;
    double CostModel::*member;
};

constexpr Field kFields[] = {
    {"sample", &CostModel::sample},
    {"steer", &CostModel::steer},
    {"nn_node_visit", &CostModel::nn_node_visit},
    {"obstacle_test", &CostModel::obstacle_test},
    {"sw_store_op", &CostModel::sw_store_op},
    {"hw_store_op", &CostModel::hw_store_op},
    {"hw_store_latency", &CostModel::hw_store_latency},
    {"cpi", &CostModel::cpi},
};

} // namespace

void save_cost_model(const CostModel& cm, std::ostream& out)
{
    json doc = json::object();
    for (const auto& f : kFields) {
        doc[f.key] = cm.*(f.member);
    }
    out << doc.dump(2) << '\n';
}

CostModel load_cost_model(std::istream& in)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("cost model: ") + e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("cost model: expected a JSON object");
    }
    CostModel cm;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const Field* match = nullptr;
        for (const auto& f : kFields) {
            if (it.key() == f.key) {
                match = &f;
            }
        }
        if (!match) {
            throw std::invalid_argument("cost model: unknown key '" + it.key() + "'");
        }
        if (!it->is_number()) {
            throw std::invalid_argument("cost model: '" + it.key() + "' must be a number");
        }
        cm.*(match->member) = it->get<double>();
    }
    cm.validate();
    return cm;
}

CostModel load_cost_model_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open cost model " + path.string());
    }
    return load_cost_model(in);
}

} // namespace mrrt
