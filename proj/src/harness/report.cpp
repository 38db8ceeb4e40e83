#include "pnm/errors.hpp"
#include "pnm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace pnm::harness
{
namespace
{
constexpr const char* kCsvHeader = "config_hash,label,ebn0_db,ber,stderr,errors,bits,frames,seed";

std::string num(double v)
{
    char       buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Labels are free text; quote when they would break the row.
std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (const char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::vector< std::string > split_csv(const std::string& line)
{
    std::vector< std::string > out;
    std::string                cur;
    bool                       quoted = false;
    for (size_t i = 0; i < line.size(); ++i)
    {
        const char c = line[i];
        if (quoted)
        {
            if (c == '"' and i + 1 < line.size() and line[i + 1] == '"')
                cur += '"', ++i;
            else if (c == '"')
                quoted = false;
            else
                cur += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
            out.push_back(std::move(cur)), cur.clear();
        else
            cur += c;
    }
    out.push_back(std::move(cur));
    return out;
}

template < typename T >
T parse_field(const std::string& s, int lineno)
{
    T          v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} or r.ptr != s.data() + s.size())
        throw IoError("csv: malformed field '" + s + "' on line " + std::to_string(lineno));
    return v;
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (const char c : s)
    {
        switch (c)
        {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}
} // namespace

void write_csv(std::ostream& os, const std::vector< SimResult >& results)
{
    os << kCsvHeader << '\n';
    for (const auto& r : results)
        for (const auto& p : r.points)
            os << hash_hex(r.hash) << ',' << csv_field(r.config.label) << ',' << num(p.ebn0_db) << ',' << num(p.ber)
               << ',' << num(p.std_error) << ',' << p.errors << ',' << p.bits << ',' << p.frames << ','
               << r.config.seed << '\n';
}

void emit_csv(const std::vector< SimResult >& results, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (not out)
        throw IoError("csv: cannot open " + path.string() + " for writing");
    write_csv(out, results);
    if (not out)
        throw IoError("csv: write to " + path.string() + " failed");
}

std::vector< CsvRow > read_csv(std::istream& is)
{
    std::vector< CsvRow > rows;
    std::string           line;
    int                   lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        if (not line.empty() and line.back() == '\r')
            line.pop_back();
        if (lineno == 1)
        {
            if (line != kCsvHeader)
                throw IoError("csv: unexpected header");
            continue;
        }
        if (line.empty())
            continue;
        const auto f = split_csv(line);
        if (f.size() != 9)
            throw IoError("csv: line " + std::to_string(lineno) + " has " + std::to_string(f.size()) + " fields");
        CsvRow r;
        r.config_hash = f[0];
        r.label       = f[1];
        r.ebn0_db     = parse_field< double >(f[2], lineno);
        r.ber         = parse_field< double >(f[3], lineno);
        r.std_error   = parse_field< double >(f[4], lineno);
        r.errors      = parse_field< long >(f[5], lineno);
        r.bits        = parse_field< long >(f[6], lineno);
        r.frames      = parse_field< long >(f[7], lineno);
        r.seed        = parse_field< std::uint64_t >(f[8], lineno);
        rows.push_back(std::move(r));
    }
    if (lineno == 0)
        throw IoError("csv: empty input");
    return rows;
}

std::vector< CsvRow > read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (not in)
        throw IoError("csv: cannot open " + path.string());
    return read_csv(in);
}

void write_plot(std::ostream& os, const std::vector< CsvRow >& rows, const std::string& title)
{
    constexpr double W = 720, H = 480, left = 70, right = 180, top = 40, bottom = 50;
    const double     pw = W - left - right;
    const double     ph = H - top - bottom;

    // Series in first-appearance order.
    std::vector< std::string >                                 order;
    std::map< std::string, std::vector< const CsvRow* > >      series;
    double x_lo = 0.0, x_hi = 1.0, y_min = 1.0;
    bool   any = false;
    for (const auto& r : rows)
    {
        if (not series.count(r.label))
            order.push_back(r.label);
        series[r.label].push_back(&r);
        x_lo = any ? std::min(x_lo, r.ebn0_db) : r.ebn0_db;
        x_hi = any ? std::max(x_hi, r.ebn0_db) : r.ebn0_db;
        any  = true;
        if (r.ber > 0.0)
            y_min = std::min(y_min, r.ber);
    }
    if (x_hi <= x_lo)
        x_hi = x_lo + 1.0;
    const int dec_lo = static_cast< int >(std::floor(std::log10(y_min)));
    const int dec_hi = 0;
    const int n_dec  = std::max(1, dec_hi - dec_lo);

    auto xs = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto ys = [&](double ber) { return top + (dec_hi - std::log10(ber)) / n_dec * ph; };

    os << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << W << R"(" height=")" << H << R"(" font-family="sans-serif" font-size="12">)" << '\n';
    os << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    if (not title.empty())
        os << R"(<text x=")" << left + pw / 2 << R"(" y="24" text-anchor="middle" font-size="14">)" << xml_escape(title) << "</text>\n";

    for (int d = 0; d <= n_dec; ++d)
    {
        const double y = top + d * ph / n_dec;
        os << R"(<line x1=")" << left << R"(" y1=")" << y << R"(" x2=")" << left + pw << R"(" y2=")" << y
           << R"(" stroke="#ddd"/>)" << '\n';
        os << R"(<text x=")" << left - 8 << R"(" y=")" << y + 4 << R"(" text-anchor="end">1e)" << dec_hi - d << "</text>\n";
    }
    const int x_ticks = 6;
    for (int t = 0; t <= x_ticks; ++t)
    {
        const double v = x_lo + (x_hi - x_lo) * t / x_ticks;
        const double x = xs(v);
        os << R"(<line x1=")" << x << R"(" y1=")" << top << R"(" x2=")" << x << R"(" y2=")" << top + ph
           << R"(" stroke="#eee"/>)" << '\n';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        os << R"(<text x=")" << x << R"(" y=")" << top + ph + 18 << R"(" text-anchor="middle">)" << buf << "</text>\n";
    }
    os << R"(<rect x=")" << left << R"(" y=")" << top << R"(" width=")" << pw << R"(" height=")" << ph
       << R"(" fill="none" stroke="black"/>)" << '\n';
    os << R"(<text x=")" << left + pw / 2 << R"(" y=")" << H - 12 << R"(" text-anchor="middle">Eb/N0 (dB)</text>)" << '\n';
    os << "<text transform=\"translate(18 " << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">BER</text>\n";

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    for (size_t s = 0; s < order.size(); ++s)
    {
        const char* color = palette[s % std::size(palette)];
        auto        pts   = series[order[s]];
        std::sort(pts.begin(), pts.end(), [](const CsvRow* a, const CsvRow* b) { return a->ebn0_db < b->ebn0_db; });
        std::string path;
        for (const auto* r : pts)
        {
            if (r->ber <= 0.0)
                continue;
            path += (path.empty() ? "M" : " L") + num(xs(r->ebn0_db)) + " " + num(ys(r->ber));
            os << R"(<circle cx=")" << xs(r->ebn0_db) << R"(" cy=")" << ys(r->ber) << R"(" r="3" fill=")" << color << R"("/>)" << '\n';
        }
        if (not path.empty())
            os << R"(<path d=")" << path << R"(" fill="none" stroke=")" << color << R"(" stroke-width="1.5"/>)" << '\n';
        const double ly = top + 14 + 18 * static_cast< double >(s);
        os << R"(<line x1=")" << left + pw + 12 << R"(" y1=")" << ly - 4 << R"(" x2=")" << left + pw + 32 << R"(" y2=")"
           << ly - 4 << R"(" stroke=")" << color << R"(" stroke-width="2"/>)" << '\n';
        os << R"(<text x=")" << left + pw + 38 << R"(" y=")" << ly << R"(">)" << xml_escape(order[s]) << "</text>\n";
    }
    os << "</svg>\n";
}

void emit_plot(const std::vector< CsvRow >& rows, const std::filesystem::path& path, const std::string& title)
{
    std::ofstream out(path);
    if (not out)
        throw IoError("plot: cannot open " + path.string() + " for writing");
    write_plot(out, rows, title);
    if (not out)
        throw IoError("plot: write to " + path.string() + " failed");
}

void write_mse_table(std::ostream& os, const std::vector< MseCell >& cells)
{
    os << "q,j,k,mse_analytic,mse_simulated,stderr,realizations\n";
    char buf[160];
    for (const auto& c : cells)
    {
        std::snprintf(buf, sizeof buf, "%d,%d,%llu,%.4f,%.4f,%.4f,%ld\n", c.q, c.j, static_cast< unsigned long long >(c.k),
                      c.analytic, c.simulated, c.std_error, c.realizations);
        os << buf;
    }
}
} // namespace pnm::harness
