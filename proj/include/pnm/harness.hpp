#ifndef PNM_HARNESS_HPP
#define PNM_HARNESS_HPP

#include "pnm/channel.hpp"
#include "pnm/codebook.hpp"
#include "pnm/compensator.hpp"
#include "pnm/phn.hpp"
#include "pnm/phy.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pnm::harness
{
enum class PhnModel
{
    none,
    wiener,
    pll,
};

enum class ChannelModel
{
    awgn,
    rayleigh,
};

enum class ReceiverKind
{
    ideal, ///< true channel, no phase-noise processing
    alg1,  ///< known channel, pilot selection per symbol
    alg2,  ///< channel estimation with decision feedback over a coded frame
};

/// One experiment. Every field is a config key of the same name.
struct SimConfig
{
    std::string label = "run";

    int  modulation        = 4; ///< bits per QAM symbol
    int  n_fft             = 64;
    int  n_cp              = 16;
    int  n_pilots          = 8;
    int  symbols_per_frame = 20;
    bool coded             = true;

    int q = 3; ///< codebook regions; q = j = 1 is the CPE-only receiver
    int j = 4; ///< codebook segments

    PhnModel phn    = PhnModel::wiener;
    double   beta_t = 0.01;
    double   pll_beta_t_vco = 0.01;
    double   pll_beta_t_ref = 1.0 / 512.0;
    double   pll_f_pll      = 100e3;

    ChannelModel channel    = ChannelModel::rayleigh;
    double       f_c        = 5e9;
    double       f_s        = 25e6;
    double       tau_rms    = 3.0;
    double       speed_kmh  = 7.0;
    int          n_taps     = 10;
    bool         integer_delays = false;
    std::optional< double > doppler; ///< true normalized Doppler, overrides speed

    ReceiverKind receiver      = ReceiverKind::alg2;
    bool         known_channel = false;
    int          depth         = 3;
    int          n_iters       = 2;
    bool         align_history = true;

    std::vector< double > ebn0_db{0.0, 4.0, 8.0, 12.0, 16.0, 20.0};
    long          max_frames   = 1000;
    long          min_bits     = 0;
    long          max_errors   = 200;
    int           batch_frames = 8;
    std::uint64_t seed         = 1;
    int           threads      = 1;

    std::optional< double > beta_t_hat;  ///< codebook design mismatch
    std::optional< double > doppler_hat; ///< MMSE statistics mismatch

    void validate() const;

    [[nodiscard]] phy::OfdmParams         ofdm() const;
    [[nodiscard]] channel::ChannelParams  channel_params() const;
    /// Statistics the receiver assumes (doppler_hat applied).
    [[nodiscard]] channel::ChannelParams  assumed_channel() const;
    [[nodiscard]] phn::WienerPhnParams    wiener() const;
    [[nodiscard]] phn::PllPhnParams       pll() const;
    [[nodiscard]] double                  code_rate() const { return coded ? coding::CodeParams::kRate : 1.0; }
    /// Design beta_t of the codebook: beta_t_hat when set.
    [[nodiscard]] double                  design_beta_t() const;
};

/// Names of every config key, in canonical order.
const std::vector< std::string >& config_keys();
void        set_config_value(SimConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const SimConfig& cfg, const std::string& key);

/// `key = value` lines; blank lines and '#' comments are ignored. Unknown keys throw ConfigError.
SimConfig   parse_config(std::istream& is, SimConfig base = {});
SimConfig   load_config(const std::filesystem::path& path, SimConfig base = {});
/// Canonical text of every key, in config_keys() order.
std::string config_text(const SimConfig& cfg);
/// FNV-1a 64 over config_text minus the run-control keys (threads).
std::uint64_t config_hash(const SimConfig& cfg);
std::string   hash_hex(std::uint64_t h);

struct PointResult
{
    double ebn0_db   = 0.0;
    long   errors    = 0;
    long   bits      = 0;
    long   frames    = 0;
    double ber       = 0.0;
    double std_error = 0.0;
    long   symbols        = 0; ///< selections counted (alg1 / alg2 last pass)
    long   zero_selected  = 0; ///< of those, all-zero trajectory chosen
};

struct SimResult
{
    SimConfig                  config;
    std::uint64_t              hash = 0;
    std::vector< PointResult > points;
    double                     wall_seconds = 0.0;
};

/// Frame-level outcome; exposed for tests and tools.
struct FrameOutcome
{
    long errors        = 0;
    long bits          = 0;
    long symbols       = 0;
    long zero_selected = 0;
};

/// Per-point state shared by the frames of one Eb/N0 value.
class PointSimulator
{
public:
    PointSimulator(const SimConfig& cfg, int ebn0_index);

    [[nodiscard]] FrameOutcome run_frame(long frame_index, rx::OpCounter* counter = nullptr) const;
    [[nodiscard]] const std::optional< codebook::Codebook >& codebook() const { return book_; }

private:
    SimConfig                           cfg_;
    int                                 ebn0_index_ = 0;
    phy::OfdmParams                     ofdm_;
    phy::NoiseModel                     noise_;
    std::optional< codebook::Codebook > book_;
    rx::MmseEstimator                   mmse_;
};

SimResult run_ber(const SimConfig& cfg);

struct MseCell
{
    int           q = 0;
    int           j = 0;
    std::uint64_t k = 0;
    double        analytic  = 0.0; ///< normalized
    double        simulated = 0.0; ///< normalized
    double        std_error = 0.0; ///< normalized
    long          realizations = 0;
};

struct MseTableConfig
{
    std::vector< int > q_values{2, 3, 4, 5, 6};
    std::vector< int > j_values{2, 4, 5, 8};
    int                n_fft        = 64;
    double             beta_t       = 0.01;
    long               realizations = 5000;
    /// Cells with K at or above large_k use large_realizations.
    std::uint64_t      large_k            = 16384;
    long               large_realizations = 500;
    std::uint64_t      seed               = 1;
};

std::vector< MseCell > run_mse(const MseTableConfig& cfg);

/// CSV: config_hash,label,ebn0_db,ber,stderr,errors,bits,frames,seed
void write_csv(std::ostream& os, const std::vector< SimResult >& results);
void emit_csv(const std::vector< SimResult >& results, const std::filesystem::path& path);

struct CsvRow
{
    std::string   config_hash;
    std::string   label;
    double        ebn0_db = 0.0;
    double        ber     = 0.0;
    double        std_error = 0.0;
    long          errors  = 0;
    long          bits    = 0;
    long          frames  = 0;
    std::uint64_t seed    = 0;
};

std::vector< CsvRow > read_csv(std::istream& is);
std::vector< CsvRow > read_csv(const std::filesystem::path& path);

/// BER versus Eb/N0 on a log axis, one series per label, as SVG.
void write_plot(std::ostream& os, const std::vector< CsvRow >& rows, const std::string& title = "");
void emit_plot(const std::vector< CsvRow >& rows, const std::filesystem::path& path, const std::string& title = "");

void write_mse_table(std::ostream& os, const std::vector< MseCell >& cells);

struct OpsReport
{
    int           n_fft   = 0;
    int           k       = 0;
    int           n_iters = 0;
    std::uint64_t formula_mults = 0;
    std::uint64_t formula_adds  = 0;
    double        measured_mults = 0.0; ///< per OFDM symbol
    double        measured_adds  = 0.0; ///< per OFDM symbol
};

/// Closed-form counts per OFDM symbol: (i + 1)(K(2N^2 + 6N + 1) + N) multiplications and
/// (i + 1)(KN(3N - 2) - K + N - 1) additions.
std::uint64_t formula_mults(int k, int n_fft, int n_iters);
std::uint64_t formula_adds(int k, int n_fft, int n_iters);

/// Formula counts plus counters from one instrumented alg2 frame (frequency-domain de-rotation).
OpsReport count_ops(const SimConfig& cfg);

/// Eb/N0 where log10(BER) crosses log10(target), by linear interpolation between adjacent points.
std::optional< double > ebn0_at_ber(const std::vector< PointResult >& points, double target);
} // namespace pnm::harness

#endif // PNM_HARNESS_HPP
