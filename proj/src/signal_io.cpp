#include "faultseg/signal_io.hpp"

#include "faultseg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace faultseg::io {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep = ',')
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view text)
{
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// "Ia[A]" -> ("Ia", ampere)
std::pair<std::string, Unit> parse_channel_header(std::string_view header)
{
    const auto open = header.find('[');
    if (open != std::string_view::npos && header.back() == ']') {
        const auto unit = trim(header.substr(open + 1, header.size() - open - 2));
        return {std::string(trim(header.substr(0, open))), unit_from_string(unit)};
    }
    return {std::string(header), Unit::dimensionless};
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double median_of(std::vector<double> v)
{
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lower_mid =
            *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lower_mid);
    }
    return m;
}

} // namespace

RecordSet load_csv(const std::filesystem::path& path, std::optional<double> fs_override)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty())
            break;
    }
    if (trim(line).empty())
        throw ParseError("'" + path.string() + "': missing header row");

    const std::string header_line(trim(line));
    const auto headers = split(header_line);
    const std::string first = lower(headers.front());
    const bool has_time = first == "t" || first == "time";
    const std::size_t first_channel = has_time ? 1 : 0;
    if (headers.size() <= first_channel)
        throw ParseError("'" + path.string() + "': no channel columns");

    std::vector<std::vector<double>> columns(headers.size());
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty())
            continue;
        const auto cells = split(row);
        if (cells.size() != headers.size())
            throw ParseError("'" + path.string() + "': row " + std::to_string(line_no) +
                             " has " + std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(headers.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_double(cells[c]);
            if (!v)
                throw ParseError("non-numeric cell at row " + std::to_string(line_no) +
                                 ", column " + std::to_string(c + 1));
            columns[c].push_back(*v);
        }
    }
    if (columns.front().empty())
        throw ParseError("'" + path.string() + "': no data rows");

    double fs = 0.0;
    double t0 = 0.0;
    if (has_time) {
        const auto& t = columns.front();
        t0 = t.front();
        std::vector<double> steps;
        for (std::size_t i = 1; i < t.size(); ++i) {
            if (!(t[i] > t[i - 1]))
                throw ParseError("'" + path.string() + "': time column is not increasing at row " +
                                 std::to_string(i + 2));
            steps.push_back(t[i] - t[i - 1]);
        }
        if (steps.empty()) {
            if (!fs_override)
                throw ConfigError("'" + path.string() +
                                  "': cannot infer fs from a single row; give fs explicitly");
            fs = *fs_override;
        } else {
            const double inferred = 1.0 / median_of(std::move(steps));
            if (fs_override) {
                if (std::abs(inferred - *fs_override) > 1e-3 * *fs_override)
                    throw ConfigError("fs disagreement: time column implies " +
                                      format_double(inferred) + " Hz, given " +
                                      format_double(*fs_override) + " Hz");
                fs = *fs_override;
            } else {
                fs = inferred;
            }
        }
    } else {
        if (!fs_override)
            throw ConfigError("'" + path.string() + "' has no time column; fs is required");
        fs = *fs_override;
    }

    RecordSet set;
    set.source = path.string();
    for (std::size_t c = first_channel; c < headers.size(); ++c) {
        auto [name, unit] = parse_channel_header(headers[c]);
        set.records.emplace_back(std::move(name), unit, fs, std::move(columns[c]), t0);
    }
    return set;
}

void write_csv(const RecordSet& set, const std::filesystem::path& path)
{
    if (set.records.empty())
        throw ConfigError("cannot write an empty record set");
    set.check_single_rate();
    const auto n = set.records.front().size();
    for (const auto& r : set.records) {
        if (r.size() != n)
            throw ConfigError("cannot write records of unequal length to one CSV file");
    }

    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << "t";
    for (const auto& r : set.records) {
        out << ',' << r.channel_id();
        if (r.unit() == Unit::volt)
            out << "[V]";
        else if (r.unit() == Unit::ampere)
            out << "[A]";
    }
    out << '\n';
    const auto& head = set.records.front();
    for (std::size_t i = 0; i < n; ++i) {
        out << format_double(head.t0() + static_cast<double>(i) / head.fs());
        for (const auto& r : set.records)
            out << ',' << format_double(r[i]);
        out << '\n';
    }
    if (!out)
        throw Error("write to '" + path.string() + "' failed");
}

RecordSet load_comtrade_1991_ascii(const std::filesystem::path& cfg_path)
{
    std::ifstream cfg(cfg_path);
    if (!cfg)
        throw ParseError("cannot open '" + cfg_path.string() + "'");

    std::vector<std::string> lines;
    for (std::string line; std::getline(cfg, line);) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }

    std::size_t cursor = 0;
    auto next = [&](const char* what) -> std::vector<std::string_view> {
        if (cursor >= lines.size())
            throw ParseError("cfg truncated: missing " + std::string(what) + " (line " +
                             std::to_string(cursor + 1) + ")");
        return split(lines[cursor++]);
    };
    auto malformed = [&](const std::string& why) {
        return ParseError("malformed cfg line " + std::to_string(cursor) + ": " + why);
    };
    auto number = [&](std::string_view cell, const char* what) {
        const auto v = parse_double(cell);
        if (!v)
            throw malformed(std::string("bad ") + what + " '" + std::string(cell) + "'");
        return *v;
    };
    auto count = [&](std::string_view cell, char suffix, const char* what) {
        if (!cell.empty() && std::toupper(static_cast<unsigned char>(cell.back())) == suffix)
            cell.remove_suffix(1);
        const double v = number(cell, what);
        if (v < 0 || v != std::floor(v))
            throw malformed(std::string("bad ") + what);
        return static_cast<std::size_t>(v);
    };

    next("station line");

    const auto totals = next("channel counts");
    if (totals.size() < 3)
        throw malformed("expected TT,##A,##D");
    const auto total = count(totals[0], ' ', "channel total");
    const auto n_analog = count(totals[1], 'A', "analog count");
    const auto n_digital = count(totals[2], 'D', "digital count");
    if (n_analog + n_digital != total)
        throw malformed("channel total does not match analog + digital counts");

    struct Analog {
        std::string id;
        Unit unit;
        double a, b;
    };
    std::vector<Analog> analogs;
    for (std::size_t i = 0; i < n_analog; ++i) {
        const auto f = next("analog channel");
        if (f.size() < 7)
            throw malformed("analog channel needs at least 7 fields");
        std::string id(f[1]);
        if (id.empty())
            id = "A" + std::string(f[0]);
        analogs.push_back({std::move(id), unit_from_string(f[4]), number(f[5], "multiplier a"),
                           number(f[6], "offset b")});
    }
    for (std::size_t i = 0; i < n_digital; ++i) {
        if (next("digital channel").size() < 2)
            throw malformed("digital channel needs at least 2 fields");
    }

    next("line frequency");
    const auto nrates_f = next("nrates");
    const auto nrates = count(nrates_f[0], ' ', "nrates");
    if (nrates == 0)
        throw ParseError("timestamp-only COMTRADE (nrates = 0) not supported");
    if (nrates > 1)
        throw ParseError("multi-rate not supported");
    const auto rate = next("sampling rate");
    if (rate.size() < 2)
        throw malformed("expected samp,endsamp");
    const double fs = number(rate[0], "sampling rate");
    const auto endsamp = count(rate[1], ' ', "endsamp");
    if (!(fs > 0))
        throw malformed("sampling rate must be positive");

    next("first-sample timestamp");
    next("trigger timestamp");
    if (cursor < lines.size()) {
        const std::string ft = lower(trim(lines[cursor++]));
        if (ft.rfind("binary", 0) == 0)
            throw ParseError("binary COMTRADE not supported");
        if (!ft.empty() && ft.rfind("ascii", 0) != 0)
            throw malformed("unknown file type '" + ft + "'");
    }

    auto dat_path = cfg_path;
    dat_path.replace_extension(".dat");
    if (!std::filesystem::exists(dat_path)) {
        dat_path.replace_extension(".DAT");
        if (!std::filesystem::exists(dat_path))
            throw ParseError("companion .dat file not found for '" + cfg_path.string() + "'");
    }
    std::ifstream dat(dat_path);
    if (!dat)
        throw ParseError("cannot open '" + dat_path.string() + "'");

    std::vector<std::vector<double>> values(n_analog);
    double t0 = 0.0;
    std::size_t row = 0;
    for (std::string line; std::getline(dat, line);) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto cells = split(trim(line));
        if (cells.size() < 2 + n_analog)
            throw ParseError("malformed dat line " + std::to_string(row) + ": expected " +
                             std::to_string(2 + n_analog + n_digital) + " fields");
        if (values.empty() || values.front().empty()) {
            const auto ts = parse_double(cells[1]);
            if (!ts)
                throw ParseError("malformed dat line " + std::to_string(row) + ": bad timestamp");
            t0 = *ts * 1e-6;
        }
        for (std::size_t c = 0; c < n_analog; ++c) {
            const auto raw = parse_double(cells[2 + c]);
            if (!raw)
                throw ParseError("malformed dat line " + std::to_string(row) +
                                 ": non-numeric value in column " + std::to_string(3 + c));
            values[c].push_back(analogs[c].a * *raw + analogs[c].b);
        }
        if (endsamp > 0 && n_analog > 0 && values.front().size() == endsamp)
            break;
    }

    RecordSet set;
    set.source = cfg_path.string();
    for (std::size_t c = 0; c < n_analog; ++c)
        set.records.emplace_back(analogs[c].id, analogs[c].unit, fs, std::move(values[c]), t0);
    return set;
}

Record normalize(const Record& record, NormalizeMode mode)
{
    const auto x = record.samples();
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> out(x.begin(), x.end());
    if (mode == NormalizeMode::subtract_mean) {
        for (auto& v : out)
            v -= mean;
    } else {
        if (std::abs(mean) < 1e-300)
            throw ConfigError("record '" + record.channel_id() +
                              "': cannot divide by a zero mean");
        for (auto& v : out)
            v /= mean;
    }
    return record.with_samples(std::move(out), record.warmup());
}

} // namespace faultseg::io
