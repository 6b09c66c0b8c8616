#include "matchsim/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace matchsim::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF on any host
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::vector<int> int_vector(const ordered_json& j, const char* field) {
    std::vector<int> v;
    for (const auto& e : j.at(field)) v.push_back(e.get<int>());
    return v;
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return ordered_json(x).dump();  // shortest round-trip decimal
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row.push_back(',');
        row += fields[i];
    }
    return row;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
    auto out = open_or_throw(path);
    out << header << '\n';
    for (const auto& row : rows) out << row << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    auto out = open_or_throw(path);
    for (const auto& line : lines) out << line << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string record_to_line(const coherent::RunRecord& record) {
    ordered_json j;
    j["protocol"] = std::string(to_string(record.protocol));
    j["n"] = record.n;
    j["mu"] = record.mu;
    if (record.phi)
        j["phi"] = *record.phi;
    else
        j["phi"] = nullptr;
    j["x"] = record.x.to_string();
    j["d0"] = record.trace.d0_slots;
    j["d1"] = record.trace.d1_slots;
    j["abstained"] = record.abstained;
    j["edge"] = {record.outcome.edge.k, record.outcome.edge.l};
    j["matching"] = record.outcome.matching_index;
    j["parity"] = record.outcome.parity;
    j["guessed"] = record.outcome.guessed;
    j["correct"] = record.correct;
    return j.dump();
}

coherent::RunRecord record_from_line(const std::string& line) {
    const ordered_json j = ordered_json::parse(line);
    coherent::RunRecord rec;
    rec.protocol = protocol_from_string(j.at("protocol").get<std::string>());
    rec.n = j.at("n").get<int>();
    rec.mu = j.at("mu").get<double>();
    if (!j.at("phi").is_null()) rec.phi = j.at("phi").get<int>();
    rec.x = BitString::parse(j.at("x").get<std::string>());
    rec.trace.slot_count =
        rec.protocol == Protocol::kSamplingMatching ? rec.n : rec.n / 2;
    rec.trace.d0_slots = int_vector(j, "d0");
    rec.trace.d1_slots = int_vector(j, "d1");
    rec.abstained = j.at("abstained").get<bool>();
    const auto& edge = j.at("edge");
    rec.outcome.edge = make_edge(edge.at(0).get<int>(), edge.at(1).get<int>());
    rec.outcome.matching_index = j.at("matching").get<int>();
    rec.outcome.parity = j.at("parity").get<int>();
    rec.outcome.guessed = j.at("guessed").get<bool>();
    rec.correct = j.at("correct").get<bool>();
    return rec;
}

std::vector<coherent::RunRecord> read_record_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open record log: " + path);
    std::vector<coherent::RunRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_line(line));
    }
    return records;
}

std::string resource_csv_row(const resource::ResourcePoint& point,
                             resource::TiMetric metric, Protocol protocol,
                             bool post_selected) {
    std::vector<std::string> fields;
    fields.push_back(std::to_string(point.n));
    if (point.feasible) {
        fields.push_back(format_double(point.mu_opt));
        fields.push_back(format_double(point.p_error));
        fields.push_back(format_double(point.ti_quantum));
    } else {
        // infeasible points keep the row but leave the quantum columns empty
        fields.insert(fields.end(), 3, "");
    }
    fields.push_back(format_double(point.ti_classical_best));
    fields.push_back(format_double(point.ti_classical_lb));
    fields.push_back(std::string(to_string(metric)));
    fields.push_back(std::string(to_string(protocol)));
    fields.push_back(post_selected ? "1" : "0");
    return csv_row(fields);
}

std::string drift_csv_row(const drift::BlockRecord& record) {
    return csv_row({std::to_string(record.block), format_double(record.true_phase),
                    format_double(record.correction), format_double(record.residual),
                    format_double(record.visibility)});
}

std::string stats_to_json(const coherent::RunStats& stats) {
    ordered_json j;
    j["protocol"] = std::string(to_string(stats.protocol));
    j["runs"] = stats.runs;
    j["runs_no_click"] = stats.runs_no_click;
    j["runs_wrong_click"] = stats.runs_wrong_click;
    j["runs_wrong_total"] = stats.runs_wrong_total;
    j["mu_per_pulse"] = stats.mu_per_pulse;
    j["p_error"] = stats.p_error;
    if (stats.p_error_post_defined)
        j["p_error_post"] = stats.p_error_post;
    else
        j["p_error_post"] = nullptr;
    j["mu_post"] = stats.mu_post;
    j["post_selected"] = stats.post_selected;
    return j.dump();
}

}  // namespace matchsim::io
