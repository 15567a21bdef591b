#include "qlocality/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qlocality::io {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing field \"") + key + "\"");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("field \"") + key + "\": " + e.what());
    }
}

std::pair<std::size_t, std::size_t> pair_field(const Json& j, const char* key) {
    const auto v = field<std::vector<std::size_t>>(j, key);
    if (v.size() != 2) throw FormatError(std::string("field \"") + key + "\" must have two entries");
    return {v[0], v[1]};
}

// Library validation errors raised while building a value from a file become FormatErrors.
template <typename F>
auto rethrow_as_format(const char* what, F&& build) {
    try {
        return build();
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && *(last - 1) == ' ') --last;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw FormatError("cannot parse number \"" + std::string(text) + "\"");
    }
    return v;
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw FormatError("matrix must be a nonempty array of rows");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().size();
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) throw FormatError("matrix rows are ragged");
        for (const auto& z : row) {
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                throw FormatError("matrix entries must be [re, im] number pairs");
            }
            entries.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
    }
    return rethrow_as_format("matrix", [&] { return ComplexMatrix(rows, cols, std::move(entries)); });
}

Json to_json(const DensityOperator& rho) {
    return Json{{"dims", {rho.dimA(), rho.dimB()}}, {"matrix", to_json(rho.matrix())}};
}

DensityOperator state_from_json(const Json& j, double tol) {
    const auto [dimA, dimB] = pair_field(j, "dims");
    if (!j.contains("matrix")) throw FormatError("missing field \"matrix\"");
    ComplexMatrix m = matrix_from_json(j.at("matrix"));
    return rethrow_as_format("state", [&] { return DensityOperator(std::move(m), dimA, dimB, tol); });
}

Json to_json(const SeparableComponents& c) {
    Json comps = Json::array();
    for (const auto& comp : c.components()) {
        comps.push_back({{"weight", comp.weight},
                         {"rhoA", to_json(comp.rhoA.matrix())},
                         {"rhoB", to_json(comp.rhoB.matrix())}});
    }
    return Json{{"dims", {c.dimA(), c.dimB()}}, {"components", std::move(comps)}};
}

SeparableComponents decomposition_from_json(const Json& j) {
    const auto [dimA, dimB] = pair_field(j, "dims");
    if (!j.contains("components") || !j.at("components").is_array()) {
        throw FormatError("missing array field \"components\"");
    }
    return rethrow_as_format("decomposition", [&] {
        std::vector<SeparableComponent> comps;
        for (const auto& c : j.at("components")) {
            comps.push_back({field<double>(c, "weight"),
                             DensityOperator(matrix_from_json(c.at("rhoA")), dimA),
                             DensityOperator(matrix_from_json(c.at("rhoB")), dimB)});
        }
        return SeparableComponents(std::move(comps));
    });
}

Json to_json(const Scenario& s) {
    return Json{{"settings", {s.settingsA, s.settingsB}}, {"outcomes", {s.outcomesA, s.outcomesB}}};
}

Scenario scenario_from_json(const Json& j) {
    const auto [sA, sB] = pair_field(j, "settings");
    const auto [oA, oB] = pair_field(j, "outcomes");
    Scenario s{sA, sB, oA, oB};
    rethrow_as_format("scenario", [&] {
        s.validate();
        return 0;
    });
    return s;
}

Json to_json(const LocalModel& model) {
    return Json{{"scenario", to_json(model.scenario())},
                {"weights", model.weights()},
                {"responseA", model.responseA()},
                {"responseB", model.responseB()}};
}

LocalModel model_from_json(const Json& j) {
    if (!j.contains("scenario")) throw FormatError("missing field \"scenario\"");
    const Scenario s = scenario_from_json(j.at("scenario"));
    auto weights = field<std::vector<double>>(j, "weights");
    auto ra = field<std::vector<LocalModel::Response>>(j, "responseA");
    auto rb = field<std::vector<LocalModel::Response>>(j, "responseB");
    return rethrow_as_format("local model", [&] {
        return LocalModel(s, std::move(weights), std::move(ra), std::move(rb));
    });
}

Json to_json(const BehaviorTable& b) {
    const Scenario& s = b.scenario();
    Json px = Json::array();
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        Json py = Json::array();
        for (std::size_t y = 0; y < s.settingsB; ++y) {
            Json pa = Json::array();
            for (std::size_t a = 0; a < s.outcomesA; ++a) {
                Json pb = Json::array();
                for (std::size_t bb = 0; bb < s.outcomesB; ++bb) pb.push_back(b(x, y, a, bb));
                pa.push_back(std::move(pb));
            }
            py.push_back(std::move(pa));
        }
        px.push_back(std::move(py));
    }
    return Json{{"scenario", to_json(s)}, {"p", std::move(px)}};
}

BehaviorTable behavior_from_json(const Json& j) {
    if (!j.contains("scenario")) throw FormatError("missing field \"scenario\"");
    const Scenario s = scenario_from_json(j.at("scenario"));
    const auto nested = field<std::vector<std::vector<std::vector<std::vector<double>>>>>(j, "p");
    std::vector<double> p(s.table_size());
    if (nested.size() != s.settingsA) throw FormatError("behavior: settings A count");
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        if (nested[x].size() != s.settingsB) throw FormatError("behavior: settings B count");
        for (std::size_t y = 0; y < s.settingsB; ++y) {
            if (nested[x][y].size() != s.outcomesA) throw FormatError("behavior: outcomes A count");
            for (std::size_t a = 0; a < s.outcomesA; ++a) {
                if (nested[x][y][a].size() != s.outcomesB) {
                    throw FormatError("behavior: outcomes B count");
                }
                for (std::size_t b = 0; b < s.outcomesB; ++b) p[s.index(x, y, a, b)] = nested[x][y][a][b];
            }
        }
    }
    return rethrow_as_format("behavior", [&] { return BehaviorTable(s, std::move(p)); });
}

Json to_json(const DensityValidation& v) {
    return Json{{"hermiticity_residual", v.hermiticity_residual},
                {"trace_deviation", v.trace_deviation},
                {"min_eigenvalue", v.min_eigenvalue},
                {"passed", v.passed}};
}

Json to_json(const PptReport& r) {
    return Json{{"min_eigenvalue", r.min_eigenvalue},
                {"verdict", to_string(r.verdict)},
                {"dims", {r.dimA, r.dimB}}};
}

Json to_json(const LhvResult& r) {
    Json j{{"verdict", to_string(r.verdict)},
           {"phase_one_objective", r.phase_one_objective},
           {"pivots", r.pivots}};
    if (r.verdict == LhvVerdict::Feasible) {
        Json support = Json::array();
        for (std::size_t k = 0; k < r.weights.size(); ++k) {
            if (r.weights[k] > 0.0) support.push_back({{"strategy", k}, {"weight", r.weights[k]}});
        }
        j["weights"] = std::move(support);
        j["reconstruction_error"] = r.reconstruction_error;
    } else {
        j["dual"] = {{"coefficients", r.dual.coefficients}, {"bound", r.dual.bound}};
        j["gap"] = r.gap;
    }
    return j;
}

Json to_json(const ScanResult& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"parameter", row.parameter},
                        {"ppt", to_json(row.ppt)},
                        {"chsh_max", row.chsh_max},
                        {"lhv_verdict", to_string(row.lhv_verdict)},
                        {"lhv_evidence", row.lhv_evidence},
                        {"classification", to_string(row.regime)}});
    }
    Json bounds = Json::array();
    for (const auto& b : r.boundaries) {
        bounds.push_back({{"below", to_string(b.below)},
                          {"above", to_string(b.above)},
                          {"grid_interval", {b.lower_grid, b.upper_grid}},
                          {"estimate", b.estimate}});
    }
    return Json{{"family", r.family}, {"rows", std::move(rows)}, {"boundaries", std::move(bounds)},
                {"caveat", r.caveat}};
}

Json to_json(const SampleResult& r) {
    const Scenario& s = r.scenario;
    Json cells = Json::array();
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        for (std::size_t y = 0; y < s.settingsB; ++y) {
            Json counts = Json::array();
            Json freqs = Json::array();
            for (std::size_t a = 0; a < s.outcomesA; ++a) {
                Json cr = Json::array();
                Json fr = Json::array();
                for (std::size_t b = 0; b < s.outcomesB; ++b) {
                    cr.push_back(r.counts[s.index(x, y, a, b)]);
                    fr.push_back(r.frequencies[s.index(x, y, a, b)]);
                }
                counts.push_back(std::move(cr));
                freqs.push_back(std::move(fr));
            }
            cells.push_back({{"settings", {x, y}},
                             {"trials", r.trials_per_setting[x * s.settingsB + y]},
                             {"counts", std::move(counts)},
                             {"frequencies", std::move(freqs)}});
        }
    }
    Json missing = Json::array();
    for (const auto& [x, y] : r.missing) missing.push_back({x, y});
    return Json{{"scenario", to_json(s)},
                {"trials", r.trials},
                {"cells", std::move(cells)},
                {"missing", std::move(missing)}};
}

Json to_json(const ChshOptimum& o) {
    return Json{{"value", o.value},
                {"directionsA", {o.directionsA[0], o.directionsA[1]}},
                {"directionsB", {o.directionsB[0], o.directionsB[1]}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw FormatError("failed writing " + path.string());
}

std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

std::vector<double> parse_grid(std::string_view text) {
    std::vector<double> values;
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        for (;;) {
            const auto colon = text.find(':', start);
            parts.push_back(parse_double(text.substr(start, colon - start)));
            if (colon == std::string_view::npos) break;
            start = colon + 1;
        }
        if (parts.size() != 3) throw FormatError("grid range must be start:stop:step");
        const double first = parts[0];
        const double last = parts[1];
        const double step = parts[2];
        if (!(step > 0.0) || !(last >= first)) {
            throw FormatError("grid range needs step > 0 and stop >= start");
        }
        const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
        if (n > 1'000'000) throw FormatError("grid has too many points");
        for (std::size_t k = 0; k < n; ++k) {
            values.push_back(std::min(last, first + static_cast<double>(k) * step));
        }
    } else {
        std::size_t start = 0;
        for (;;) {
            const auto comma = text.find(',', start);
            values.push_back(parse_double(text.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    return values;
}

}  // namespace qlocality::io
