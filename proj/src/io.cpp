#include "fockmaj/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "json.hpp"

#include "fockmaj/errors.hpp"

namespace fockmaj::io {

std::string format_double(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("format_double: non-finite value");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

// Hand-rolled emitter: fixed key order and shortest-round-trip numbers,
// so identical inputs serialize to identical bytes.
class JsonWriter {
public:
    void begin_object() {
        separate();
        out_ += '{';
        first_.push_back(true);
    }
    void end_object() {
        out_ += '}';
        first_.pop_back();
    }
    void begin_array() {
        separate();
        out_ += '[';
        first_.push_back(true);
    }
    void end_array() {
        out_ += ']';
        first_.pop_back();
    }
    void key(std::string_view k) {
        separate();
        append_string(k);
        out_ += ':';
        after_key_ = true;
    }
    void value(double v) {
        separate();
        out_ += format_double(v);
    }
    void value_uint(std::uint64_t v) {
        separate();
        out_ += std::to_string(v);
    }
    void value(std::string_view v) {
        separate();
        append_string(v);
    }
    // String literals would otherwise pick the bool overload.
    void value(const char* v) { value(std::string_view(v)); }
    void value(bool v) {
        separate();
        out_ += v ? "true" : "false";
    }
    void null() {
        separate();
        out_ += "null";
    }
    std::string str() && { return std::move(out_); }

private:
    void separate() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (first_.empty())
            return;
        if (first_.back())
            first_.back() = false;
        else
            out_ += ',';
    }
    void append_string(std::string_view s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\r': out_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char esc[8];
                    std::snprintf(esc, sizeof(esc), "\\u%04x", c);
                    out_ += esc;
                } else {
                    out_ += c;
                }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> first_;
    bool after_key_ = false;
};

void write_distribution(JsonWriter& w, const FockDistribution& rho) {
    w.begin_object();
    w.key("probs");
    w.begin_array();
    for (double p : rho.probs())
        w.value(p);
    w.end_array();
    w.key("tail_mass");
    w.value(rho.tail_mass());
    w.end_object();
}

void write_spec(JsonWriter& w, const ChannelSpec& spec) {
    w.begin_object();
    w.key("kind");
    if (const auto* l = std::get_if<PureLoss>(&spec.node())) {
        w.value("loss");
        w.key("transmittance");
        w.value(l->transmittance);
    } else if (const auto* a = std::get_if<Amplifier>(&spec.node())) {
        w.value("amplifier");
        w.key("gain");
        w.value(a->gain);
    } else {
        w.value("composite");
        w.key("stages");
        w.begin_array();
        for (const ChannelSpec& st : std::get<ChannelSpec::Composite>(spec.node()))
            write_spec(w, st);
        w.end_array();
    }
    w.end_object();
}

void write_witness(JsonWriter& w, const Witness& wit) {
    w.begin_object();
    w.key("label");
    w.value(wit.label);
    w.key("values");
    w.begin_object();
    for (const auto& [name, v] : wit.values) {
        w.key(name);
        w.value(v);
    }
    w.end_object();
    w.key("states");
    w.begin_object();
    for (const auto& [name, st] : wit.states) {
        w.key(name);
        write_distribution(w, st);
    }
    w.end_object();
    w.end_object();
}

void write_report(JsonWriter& w, const ScanReport& rep) {
    w.begin_object();
    w.key("name");
    w.value(rep.name);
    w.key("channel");
    w.value(rep.channel);
    w.key("trials");
    w.value_uint(rep.trials);
    w.key("violations");
    w.value_uint(rep.violations);
    w.key("worst_margin");
    w.value(rep.worst_margin);
    w.key("metrics");
    w.begin_object();
    for (const auto& [name, v] : rep.metrics) {
        w.key(name);
        w.value(v);
    }
    w.end_object();
    w.key("flags");
    w.begin_array();
    for (const std::string& f : rep.flags)
        w.value(f);
    w.end_array();
    w.key("config");
    w.begin_object();
    w.key("cutoff");
    w.value_uint(rep.config.cutoff);
    w.key("eps_cmp");
    w.value(rep.config.tol.cmp);
    w.key("eps_norm");
    w.value(rep.config.tol.norm);
    w.key("tail_eps");
    w.value(rep.config.tol.tail);
    w.key("seed");
    w.value_uint(rep.config.seed);
    w.end_object();
    w.key("witnesses");
    w.begin_array();
    for (const Witness& wit : rep.witnesses)
        write_witness(w, wit);
    w.end_array();
    w.end_object();
}

} // namespace

std::string to_json(const FockDistribution& rho) {
    JsonWriter w;
    write_distribution(w, rho);
    return std::move(w).str();
}

std::string to_json(const ComparisonOutcome& outcome) {
    JsonWriter w;
    w.begin_object();
    w.key("verdict");
    w.value(to_string(outcome.verdict));
    w.key("witness_up");
    if (outcome.witness_up)
        w.value_uint(*outcome.witness_up);
    else
        w.null();
    w.key("witness_down");
    if (outcome.witness_down)
        w.value_uint(*outcome.witness_down);
    else
        w.null();
    w.key("margin");
    w.value(outcome.margin);
    w.end_object();
    return std::move(w).str();
}

std::string to_json(const ChannelKernel& kernel) {
    JsonWriter w;
    w.begin_object();
    w.key("params");
    if (kernel.spec()) {
        write_spec(w, *kernel.spec());
    } else {
        w.begin_object();
        w.key("kind");
        w.value("custom");
        w.key("label");
        w.value(kernel.label());
        w.end_object();
    }
    w.key("rows");
    w.value_uint(kernel.output_dim());
    w.key("cols");
    w.value_uint(kernel.input_dim());
    w.key("matrix");
    w.begin_array();
    for (std::size_t n = 0; n < kernel.output_dim(); ++n) {
        w.begin_array();
        for (std::size_t k = 0; k < kernel.input_dim(); ++k)
            w.value(kernel.entry(n, k));
        w.end_array();
    }
    w.end_array();
    w.key("column_tails");
    w.begin_array();
    for (double t : kernel.column_tails())
        w.value(t);
    w.end_array();
    w.end_object();
    return std::move(w).str();
}

std::string to_json(const ScanReport& report) {
    JsonWriter w;
    write_report(w, report);
    return std::move(w).str();
}

std::string to_json(const std::vector<ScanReport>& reports) {
    JsonWriter w;
    w.begin_array();
    for (const ScanReport& r : reports)
        write_report(w, r);
    w.end_array();
    return std::move(w).str();
}

std::string to_csv(const FockDistribution& rho) {
    std::string out = "index,probability\n";
    for (std::size_t n = 0; n < rho.size(); ++n)
        out += std::to_string(n) + "," + format_double(rho.prob(n)) + "\n";
    return out;
}

std::string to_csv(const PartialSumCurve& curve) {
    std::string out = "index,cumulative\n";
    for (std::size_t n = 0; n < curve.sums.size(); ++n)
        out += std::to_string(n) + "," + format_double(curve.sums[n]) + "\n";
    return out;
}

std::string to_csv(const ChannelKernel& kernel) {
    std::string out;
    for (std::size_t n = 0; n < kernel.output_dim(); ++n) {
        for (std::size_t k = 0; k < kernel.input_dim(); ++k) {
            if (k)
                out += ",";
            out += format_double(kernel.entry(n, k));
        }
        out += "\n";
    }
    return out;
}

namespace {

using nlohmann::json;

json parse_or_invalid(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad JSON: ") + e.what());
    }
}

double field_as_double(const json& j, const char* what) {
    if (!j.is_number())
        throw std::invalid_argument(std::string(what) + " must be a number");
    return j.get<double>();
}

// Splits CSV text into non-empty lines, dropping a leading header line
// (any line containing letters).
std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        bool has_alpha = false;
        for (char c : line)
            if (std::isalpha(static_cast<unsigned char>(c)) && c != 'e' && c != 'E' &&
                c != '+' && c != '-')
                has_alpha = true;
        if (has_alpha && lines.empty())
            continue; // header
        if (has_alpha)
            throw std::invalid_argument("bad CSV line: " + line);
        lines.push_back(line);
    }
    return lines;
}

double parse_double_field(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos != s.size())
            throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad CSV number: " + s);
    }
}

std::vector<double> split_csv_row(const std::string& line) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string field = comma == std::string::npos
                                      ? line.substr(start)
                                      : line.substr(start, comma - start);
        out.push_back(parse_double_field(field));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

ChannelSpec spec_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "loss")
        return ChannelSpec::loss(field_as_double(j.at("transmittance"), "transmittance"));
    if (kind == "amplifier")
        return ChannelSpec::amplifier(field_as_double(j.at("gain"), "gain"));
    if (kind == "composite") {
        std::vector<ChannelSpec> stages;
        for (const json& st : j.at("stages"))
            stages.push_back(spec_from_json(st));
        return ChannelSpec::composite(std::move(stages));
    }
    throw std::invalid_argument("unknown channel kind: " + kind);
}

} // namespace

FockDistribution distribution_from_json(const std::string& text, const Tolerances& tol) {
    const json j = parse_or_invalid(text);
    if (!j.is_object() || !j.contains("probs"))
        throw std::invalid_argument("distribution JSON needs a probs array");
    std::vector<double> probs;
    for (const json& v : j.at("probs"))
        probs.push_back(field_as_double(v, "probs entry"));
    const double tail = j.contains("tail_mass")
                            ? field_as_double(j.at("tail_mass"), "tail_mass")
                            : 0.0;
    return FockDistribution(std::move(probs), tail, tol);
}

FockDistribution distribution_from_csv(const std::string& text, const Tolerances& tol) {
    std::vector<double> probs;
    for (const std::string& line : csv_lines(text)) {
        const std::vector<double> fields = split_csv_row(line);
        if (fields.empty() || fields.size() > 2)
            throw std::invalid_argument("distribution CSV rows need 1 or 2 fields");
        probs.push_back(fields.back());
    }
    if (probs.empty())
        throw std::invalid_argument("distribution CSV has no rows");
    double sum = 0.0;
    for (double p : probs)
        sum += p;
    return FockDistribution(std::move(probs), std::max(1.0 - sum, 0.0), tol);
}

ChannelKernel kernel_from_json(const std::string& text) {
    const json j = parse_or_invalid(text);
    if (!j.is_object() || !j.contains("matrix"))
        throw std::invalid_argument("kernel JSON needs a matrix");
    const json& rows = j.at("matrix");
    if (!rows.is_array() || rows.empty())
        throw std::invalid_argument("kernel matrix must be a non-empty array of rows");
    const std::size_t cols = rows.at(0).size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const json& row = rows.at(r);
        if (row.size() != cols)
            throw std::invalid_argument("kernel matrix rows have uneven lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m.at(r, c) = field_as_double(row.at(c), "matrix entry");
    }
    std::vector<double> tails(cols, 0.0);
    if (j.contains("column_tails")) {
        const json& jt = j.at("column_tails");
        if (jt.size() != cols)
            throw std::invalid_argument("column_tails length must match cols");
        for (std::size_t c = 0; c < cols; ++c)
            tails[c] = field_as_double(jt.at(c), "column tail");
    }
    std::optional<ChannelSpec> spec;
    std::string label = "custom";
    if (j.contains("params") && j.at("params").is_object()) {
        const json& p = j.at("params");
        const std::string kind = p.value("kind", "custom");
        if (kind == "custom") {
            label = p.value("label", "custom");
        } else {
            spec = spec_from_json(p);
            label = spec->describe();
        }
    }
    return ChannelKernel(std::move(m), std::move(tails), std::move(label),
                         std::move(spec));
}

ChannelKernel kernel_from_csv(const std::string& text) {
    const std::vector<std::string> lines = csv_lines(text);
    if (lines.empty())
        throw std::invalid_argument("kernel CSV has no rows");
    std::vector<std::vector<double>> rows;
    for (const std::string& line : lines)
        rows.push_back(split_csv_row(line));
    const std::size_t cols = rows[0].size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw std::invalid_argument("kernel CSV rows have uneven lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m.at(r, c) = rows[r][c];
    }
    std::vector<double> tails(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r)
            sum += m.at(r, c);
        tails[c] = std::max(1.0 - sum, 0.0);
    }
    return ChannelKernel(std::move(m), std::move(tails), "custom");
}

PartialSumCurve curve_from_csv(const std::string& text, CurveMode mode) {
    PartialSumCurve curve;
    curve.mode = mode;
    for (const std::string& line : csv_lines(text)) {
        const std::vector<double> fields = split_csv_row(line);
        if (fields.empty() || fields.size() > 2)
            throw std::invalid_argument("curve CSV rows need 1 or 2 fields");
        curve.sums.push_back(fields.back());
    }
    if (curve.sums.empty())
        throw std::invalid_argument("curve CSV has no rows");
    return curve;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot write file: " + path);
    out << content;
    if (!out)
        throw std::invalid_argument("failed writing file: " + path);
}

} // namespace fockmaj::io
