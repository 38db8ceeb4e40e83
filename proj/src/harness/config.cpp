#include "pnm/errors.hpp"
#include "pnm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace pnm::harness
{
namespace
{
std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double to_double(const std::string& key, const std::string& v)
{
    double     out = 0.0;
    const auto r   = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} or r.ptr != v.data() + v.size())
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    return out;
}

template < typename Int >
Int to_int(const std::string& key, const std::string& v)
{
    Int        out = 0;
    const auto r   = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} or r.ptr != v.data() + v.size())
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" or v == "1" or v == "yes" or v == "on")
        return true;
    if (v == "false" or v == "0" or v == "no" or v == "off")
        return false;
    throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

std::optional< double > to_opt(const std::string& key, const std::string& v)
{
    if (v.empty() or v == "none")
        return std::nullopt;
    return to_double(key, v);
}

std::string opt_str(const std::optional< double >& v)
{
    return v ? fmt(*v) : "none";
}

template < typename E >
struct EnumName
{
    E           value;
    const char* name;
};

constexpr EnumName< PhnModel >     kPhnNames[]      = {{PhnModel::none, "none"}, {PhnModel::wiener, "wiener"}, {PhnModel::pll, "pll"}};
constexpr EnumName< ChannelModel > kChannelNames[]  = {{ChannelModel::awgn, "awgn"}, {ChannelModel::rayleigh, "rayleigh"}};
constexpr EnumName< ReceiverKind > kReceiverNames[] = {
    {ReceiverKind::ideal, "ideal"}, {ReceiverKind::alg1, "alg1"}, {ReceiverKind::alg2, "alg2"}};

template < typename E, size_t N >
E to_enum(const std::string& key, const std::string& v, const EnumName< E > (&names)[N])
{
    for (const auto& n : names)
        if (v == n.name)
            return n.value;
    throw ConfigError("config: unknown value '" + v + "' for " + key);
}

template < typename E, size_t N >
std::string enum_str(E value, const EnumName< E > (&names)[N])
{
    for (const auto& n : names)
        if (value == n.value)
            return n.name;
    throw InternalError("config: unnamed enum value");
}

struct Key
{
    std::string                                                        name;
    std::function< std::string(const SimConfig&) >                     get;
    std::function< void(SimConfig&, const std::string&, const std::string&) > set;
};

#define PNM_INT_KEY(field)                                                                                             \
    Key{#field, [](const SimConfig& c) { return std::to_string(c.field); },                                           \
        [](SimConfig& c, const std::string& k, const std::string& v) { c.field = to_int< decltype(c.field) >(k, v); }}
#define PNM_DOUBLE_KEY(field)                                                                                          \
    Key{#field, [](const SimConfig& c) { return fmt(c.field); },                                                      \
        [](SimConfig& c, const std::string& k, const std::string& v) { c.field = to_double(k, v); }}
#define PNM_BOOL_KEY(field)                                                                                            \
    Key{#field, [](const SimConfig& c) { return std::string(c.field ? "true" : "false"); },                           \
        [](SimConfig& c, const std::string& k, const std::string& v) { c.field = to_bool(k, v); }}
#define PNM_OPT_KEY(field)                                                                                             \
    Key{#field, [](const SimConfig& c) { return opt_str(c.field); },                                                  \
        [](SimConfig& c, const std::string& k, const std::string& v) { c.field = to_opt(k, v); }}

const std::vector< Key >& registry()
{
    static const std::vector< Key > keys = {
        Key{"label", [](const SimConfig& c) { return c.label; },
            [](SimConfig& c, const std::string&, const std::string& v) { c.label = v; }},
        PNM_INT_KEY(modulation),
        PNM_INT_KEY(n_fft),
        PNM_INT_KEY(n_cp),
        PNM_INT_KEY(n_pilots),
        PNM_INT_KEY(symbols_per_frame),
        PNM_BOOL_KEY(coded),
        PNM_INT_KEY(q),
        PNM_INT_KEY(j),
        Key{"phn", [](const SimConfig& c) { return enum_str(c.phn, kPhnNames); },
            [](SimConfig& c, const std::string& k, const std::string& v) { c.phn = to_enum(k, v, kPhnNames); }},
        PNM_DOUBLE_KEY(beta_t),
        PNM_DOUBLE_KEY(pll_beta_t_vco),
        PNM_DOUBLE_KEY(pll_beta_t_ref),
        PNM_DOUBLE_KEY(pll_f_pll),
        Key{"channel", [](const SimConfig& c) { return enum_str(c.channel, kChannelNames); },
            [](SimConfig& c, const std::string& k, const std::string& v) { c.channel = to_enum(k, v, kChannelNames); }},
        PNM_DOUBLE_KEY(f_c),
        PNM_DOUBLE_KEY(f_s),
        PNM_DOUBLE_KEY(tau_rms),
        PNM_DOUBLE_KEY(speed_kmh),
        PNM_INT_KEY(n_taps),
        PNM_BOOL_KEY(integer_delays),
        PNM_OPT_KEY(doppler),
        Key{"receiver", [](const SimConfig& c) { return enum_str(c.receiver, kReceiverNames); },
            [](SimConfig& c, const std::string& k, const std::string& v) { c.receiver = to_enum(k, v, kReceiverNames); }},
        PNM_BOOL_KEY(known_channel),
        PNM_INT_KEY(depth),
        PNM_INT_KEY(n_iters),
        PNM_BOOL_KEY(align_history),
        Key{"ebn0_db",
            [](const SimConfig& c) {
                std::string s;
                for (size_t i = 0; i < c.ebn0_db.size(); ++i)
                    s += (i ? "," : "") + fmt(c.ebn0_db[i]);
                return s;
            },
            [](SimConfig& c, const std::string& k, const std::string& v) {
                c.ebn0_db.clear();
                std::stringstream ss(v);
                for (std::string item; std::getline(ss, item, ',');)
                    if (const std::string t = trim(item); not t.empty())
                        c.ebn0_db.push_back(to_double(k, t));
            }},
        PNM_INT_KEY(max_frames),
        PNM_INT_KEY(min_bits),
        PNM_INT_KEY(max_errors),
        PNM_INT_KEY(batch_frames),
        PNM_INT_KEY(seed),
        PNM_INT_KEY(threads),
        PNM_OPT_KEY(beta_t_hat),
        PNM_OPT_KEY(doppler_hat),
    };
    return keys;
}

#undef PNM_INT_KEY
#undef PNM_DOUBLE_KEY
#undef PNM_BOOL_KEY
#undef PNM_OPT_KEY

const Key& find_key(const std::string& name)
{
    const auto& r  = registry();
    const auto  it = std::find_if(r.begin(), r.end(), [&](const Key& k) { return k.name == name; });
    if (it == r.end())
        throw ConfigError("config: unknown key '" + name + "'");
    return *it;
}
} // namespace

void SimConfig::validate() const
{
    ofdm().validate();
    if (q < 1 or j < 1 or j > n_fft)
        throw ConfigError("config: need q >= 1 and 1 <= j <= n_fft");
    if (beta_t < 0.0 or (beta_t_hat and *beta_t_hat < 0.0))
        throw ConfigError("config: beta_t must be >= 0");
    if (ebn0_db.empty())
        throw ConfigError("config: ebn0_db must hold at least one point");
    for (size_t i = 1; i < ebn0_db.size(); ++i)
        if (not(ebn0_db[i] > ebn0_db[i - 1]))
            throw ConfigError("config: ebn0_db must be strictly increasing");
    if (max_frames < 1 or batch_frames < 1 or threads < 1 or max_errors < 0 or min_bits < 0)
        throw ConfigError("config: frame budget, batch size and thread count must be positive");
    if (depth < 1 or n_iters < 0)
        throw ConfigError("config: need depth >= 1 and n_iters >= 0");
    if (receiver == ReceiverKind::alg2 and not coded)
        throw ConfigError("config: the alg2 receiver needs coded frames");
    if (coded)
        (void)coding::CodeParams::info_length(ofdm().bits_per_frame());
    if (channel == ChannelModel::rayleigh)
        channel_params().validate();
    if (phn == PhnModel::wiener)
        wiener().validate();
    if (phn == PhnModel::pll)
        pll().validate();
}

phy::OfdmParams SimConfig::ofdm() const
{
    return phy::OfdmParams{n_fft, n_cp, n_pilots, modulation, symbols_per_frame};
}

channel::ChannelParams SimConfig::channel_params() const
{
    channel::ChannelParams p;
    p.f_c              = f_c;
    p.f_s              = f_s;
    p.tau_rms          = tau_rms;
    p.speed_mps        = speed_kmh / 3.6;
    p.n_taps           = n_taps;
    p.n_fft            = n_fft;
    p.n_cp             = n_cp;
    p.doppler_override = doppler;
    p.integer_delays   = integer_delays;
    return p;
}

channel::ChannelParams SimConfig::assumed_channel() const
{
    channel::ChannelParams p = channel_params();
    if (doppler_hat)
        p.doppler_override = doppler_hat;
    return p;
}

phn::WienerPhnParams SimConfig::wiener() const
{
    return phn::WienerPhnParams{beta_t, n_fft, n_cp};
}

phn::PllPhnParams SimConfig::pll() const
{
    phn::PllPhnParams p;
    p.beta_t_vco = pll_beta_t_vco;
    p.beta_t_ref = pll_beta_t_ref;
    p.f_pll      = pll_f_pll;
    p.f_c        = f_c;
    p.f_s        = f_s;
    p.n_fft      = n_fft;
    p.n_cp       = n_cp;
    return p;
}

double SimConfig::design_beta_t() const
{
    return beta_t_hat.value_or(beta_t);
}

const std::vector< std::string >& config_keys()
{
    static const std::vector< std::string > names = [] {
        std::vector< std::string > out;
        for (const auto& k : registry())
            out.push_back(k.name);
        return out;
    }();
    return names;
}

void set_config_value(SimConfig& cfg, const std::string& key, const std::string& value)
{
    find_key(key).set(cfg, key, trim(value));
}

std::string get_config_value(const SimConfig& cfg, const std::string& key)
{
    return find_key(key).get(cfg);
}

SimConfig parse_config(std::istream& is, SimConfig base)
{
    std::string line;
    int         lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base)
{
    std::ifstream in(path);
    if (not in)
        throw IoError("config: cannot open " + path.string());
    return parse_config(in, std::move(base));
}

std::string config_text(const SimConfig& cfg)
{
    std::string out;
    for (const auto& k : registry())
        out += k.name + " = " + k.get(cfg) + "\n";
    return out;
}

std::uint64_t config_hash(const SimConfig& cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& k : registry())
    {
        if (k.name == "threads")
            continue;
        for (const char c : k.name + "=" + k.get(cfg) + "\n")
        {
            h ^= static_cast< unsigned char >(c);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string hash_hex(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast< unsigned long long >(h));
    return buf;
}
} // namespace pnm::harness
