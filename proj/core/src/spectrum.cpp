#include "zrange/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "zrange/linalg.hpp"
#include "zrange/potential.hpp"

namespace zrange {

OperatorMatrix::OperatorMatrix(Eigen::MatrixXd m, RadialGrid g, double mass_, int dimension_, std::string label_)
    : entries(std::move(m)), grid(std::move(g)), mass(mass_), dimension(dimension_), label(std::move(label_)) {
    if (entries.rows() != entries.cols()) throw InvalidArgument("operator matrix must be square");
    if (static_cast<std::size_t>(entries.rows()) != grid.size())
        throw InvalidArgument("operator dimension does not match grid size");
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    require_symmetric(entries, 1e-10, label.empty() ? "operator" : label);
}

std::vector<double> SpectrumReport::negative() const {
    std::vector<double> out;
    for (double e : eigenvalues) {
        if (e < 0.0) out.push_back(e);
    }
    return out;
}

SpectrumReport make_spectrum(std::vector<double> eigenvalues) {
    SpectrumReport rep;
    std::sort(eigenvalues.begin(), eigenvalues.end());
    rep.eigenvalues = std::move(eigenvalues);
    rep.count_negative = static_cast<int>(
        std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](double e) { return e < 0.0; }));
    for (int i = 0; i + 1 < rep.count_negative; ++i)
        rep.ratios.push_back(std::abs(rep.eigenvalues[i + 1]) / std::abs(rep.eigenvalues[i]));
    return rep;
}

SpectrumReport eig_spectrum(const Eigen::MatrixXd& m, bool want_vectors) {
    require_symmetric(m, 1e-10, "eig_spectrum");
    auto eig = symmetric_eigen(m, want_vectors);
    SpectrumReport rep = make_spectrum(std::vector<double>(eig.values.data(), eig.values.data() + eig.values.size()));
    if (want_vectors) rep.eigenvectors = std::move(eig.vectors);
    return rep;
}

SpectrumReport eig_spectrum(const OperatorMatrix& m, bool want_vectors) {
    return eig_spectrum(m.entries, want_vectors);
}

}  // namespace zrange
