#include "cfq/matrix_io.hpp"

#include <cstdio>
#include <fstream>

namespace cfq {

namespace {

nlohmann::json interleave(const cxd* data, long count) {
    std::vector<double> flat;
    flat.reserve(2 * count);
    for (long i = 0; i < count; ++i) {
        flat.push_back(data[i].real());
        flat.push_back(data[i].imag());
    }
    return nlohmann::json(flat);
}

}  // namespace

nlohmann::json operator_to_json(const FockOperator& A) {
    const long n = A.space().dim();
    // row-major scan
    std::vector<cxd> rowmajor;
    rowmajor.reserve(n * n);
    for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c) rowmajor.push_back(A.matrix()(r, c));
    return nlohmann::json{{"kind", "operator"},
                          {"cutoff", A.space().cutoff()},
                          {"dof", A.space().dof()},
                          {"dim", n},
                          {"layout", "row-major interleaved re/im"},
                          {"data", interleave(rowmajor.data(), n * n)}};
}

nlohmann::json state_to_json(const StateVector& s) {
    return nlohmann::json{{"kind", "state"},
                          {"cutoff", s.space().cutoff()},
                          {"dof", s.space().dof()},
                          {"dim", s.space().dim()},
                          {"layout", "interleaved re/im"},
                          {"data", interleave(s.vector().data(), s.space().dim())}};
}

FockOperator operator_from_json(const nlohmann::json& j) {
    if (j.value("kind", "") != "operator")
        throw ConfigError("operator_from_json: kind is not 'operator'");
    const FockSpace space(j.at("cutoff").get<int>(), j.at("dof").get<int>());
    const auto& data = j.at("data");
    const long n = space.dim();
    if (static_cast<long>(data.size()) != 2 * n * n)
        throw ConfigError("operator_from_json: data length does not match dim^2");
    Mat M(n, n);
    for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c) {
            const long k = 2 * (r * n + c);
            M(r, c) = cxd(data[k].get<double>(), data[k + 1].get<double>());
        }
    return FockOperator(space, std::move(M));
}

StateVector state_from_json(const nlohmann::json& j) {
    if (j.value("kind", "") != "state")
        throw ConfigError("state_from_json: kind is not 'state'");
    const FockSpace space(j.at("cutoff").get<int>(), j.at("dof").get<int>());
    const auto& data = j.at("data");
    const long n = space.dim();
    if (static_cast<long>(data.size()) != 2 * n)
        throw ConfigError("state_from_json: data length does not match dim");
    Vec v(n);
    for (long i = 0; i < n; ++i) v(i) = cxd(data[2 * i].get<double>(), data[2 * i + 1].get<double>());
    return StateVector(space, std::move(v));
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("write_json_file: cannot open " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("read_json_file: cannot open " + path);
    return nlohmann::json::parse(in);
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DomainError("write_text_file: cannot open " + path);
    out << content;
}

}  // namespace cfq
