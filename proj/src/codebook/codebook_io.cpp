#include "pnm/codebook.hpp"

#include "pnm/errors.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

// Text table layout:
//
//   # pnm-codebook v1
//   Q <regions>
//   J <segments>
//   N <fft size>
//   sigma_eps_sq <rad^2>
//   K <entries>
//   <K rows of N whitespace-separated phases in radians>
namespace pnm::codebook
{
namespace
{
constexpr const char* kMagic = "# pnm-codebook v1";

template < typename T >
T read_field(std::istream& is, const std::string& key)
{
    std::string name;
    T           value{};
    if (not(is >> name >> value) or name != key)
        throw IoError("codebook file: expected header field '" + key + "'");
    return value;
}
} // namespace

void write_codebook(std::ostream& os, const Codebook& book)
{
    const auto& d = book.design;
    os << kMagic << '\n';
    os << "Q " << d.n_regions << '\n';
    os << "J " << d.n_segments << '\n';
    os << "N " << d.n_fft << '\n';
    os << "sigma_eps_sq " << std::setprecision(17) << d.sigma_eps_sq << '\n';
    os << "K " << book.size() << '\n';
    for (Eigen::Index k = 0; k < book.phases.rows(); ++k)
    {
        for (Eigen::Index n = 0; n < book.phases.cols(); ++n)
            os << (n ? " " : "") << std::setprecision(17) << book.phases(k, n);
        os << '\n';
    }
    if (not os)
        throw IoError("codebook: write failed");
}

Codebook read_codebook(std::istream& is)
{
    std::string magic;
    std::getline(is, magic);
    if (magic != kMagic)
        throw IoError("codebook file: bad magic line");
    const int    q   = read_field< int >(is, "Q");
    const int    j   = read_field< int >(is, "J");
    const int    n   = read_field< int >(is, "N");
    const double se2 = read_field< double >(is, "sigma_eps_sq");
    const long   k   = read_field< long >(is, "K");

    Codebook book;
    book.design = make_design(n, j, q, se2);
    if (static_cast< std::uint64_t >(k) != book.design.size())
        throw IoError("codebook file: K does not equal Q^(J-1)");
    book.phases.resize(k, n);
    for (long r = 0; r < k; ++r)
        for (int c = 0; c < n; ++c)
            if (not(is >> book.phases(r, c)))
                throw IoError("codebook file: truncated phase table");
    book.rotators = (book.phases.transpose().cast< cd >() * cd{0.0, -1.0}).array().exp().matrix();
    return book;
}

void save_codebook(const std::filesystem::path& path, const Codebook& book)
{
    std::ofstream os(path);
    if (not os)
        throw IoError("cannot open " + path.string() + " for writing");
    write_codebook(os, book);
}

Codebook load_codebook(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (not is)
        throw IoError("cannot open " + path.string());
    return read_codebook(is);
}
} // namespace pnm::codebook
