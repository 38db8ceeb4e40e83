#ifndef PNM_CODING_HPP
#define PNM_CODING_HPP

#include "pnm/types.hpp"

#include <span>

namespace pnm::coding
{
/// Rate-1/2, constraint-length-7 feed-forward code with the (133, 171) octal generator pair.
struct CodeParams
{
    static constexpr int      kConstraintLength = 7;
    static constexpr int      kMemory           = kConstraintLength - 1;
    static constexpr int      kTailBits         = kMemory;
    static constexpr unsigned kG0               = 0133;
    static constexpr unsigned kG1               = 0171;
    static constexpr double   kRate             = 0.5;

    int interleave_span = 20; ///< OFDM symbols per interleaver block

    /// Codeword length for n information bits: 2 (n + 6).
    [[nodiscard]] static int coded_length(int n_info) { return 2 * (n_info + kTailBits); }
    /// Information bits that exactly fill n_coded bits; throws FramingError when impossible.
    [[nodiscard]] static int info_length(int n_coded);
};

/// Zero-terminated convolutional encoding.
Bits conv_encode(std::span< const unsigned char > bits);

/// Hard-decision (Hamming metric) Viterbi decoding of a terminated codeword with full traceback.
Bits viterbi_decode(std::span< const unsigned char > coded);

/// Row-column block interleaver: input bit i is written to row r = i % span at column
/// (i / span + r * row_shift) % bits_per_row, and rows are read out one after another. Row r becomes
/// the payload of OFDM symbol r. The cyclic shift moves consecutive bits onto different subcarriers
/// as well as different symbols; row_shift = 0 is the plain row-column layout.
Bits interleave(std::span< const unsigned char > bits, int span, int bits_per_row, int row_shift = 0);
Bits deinterleave(std::span< const unsigned char > bits, int span, int bits_per_row, int row_shift = 0);

/// Row shift used for frames: bits_per_symbol * ceil(n_data / span), i.e. ceil(n_data / span)
/// subcarriers per row, so one interleaver column sweeps the band.
int frame_row_shift(int n_data, int bits_per_symbol, int span);
} // namespace pnm::coding

#endif // PNM_CODING_HPP
