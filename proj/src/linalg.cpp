#include "qlocality/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qlocality/errors.hpp"

namespace qlocality {

namespace {

void require_finite(std::span<const Complex> entries) {
    for (const auto& z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw DomainError("matrix entry is not finite");
        }
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << what << ": shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
            << b.cols();
        throw ShapeError(msg.str());
    }
}

void require_bipartite(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                       const char* what) {
    if (dimA == 0 || dimB == 0 || !m.is_square() || m.rows() != dimA * dimB) {
        std::ostringstream msg;
        msg << what << ": expected a square matrix of side " << dimA << "*" << dimB << ", got "
            << m.rows() << "x" << m.cols();
        throw ShapeError(msg.str());
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) {
        std::ostringstream msg;
        msg << "expected " << rows * cols << " entries, got " << data_.size();
        throw ShapeError(msg.str());
    }
    require_finite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    require_finite(m.entries());
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged row list");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    }
    require_finite(m.entries());
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw ShapeError("trace of a non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "matrix sum");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "matrix difference");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) z *= scale;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex scale) { return a *= scale; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return m;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw ShapeError("trace_of_product: incompatible shapes");
    }
    Complex t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
    }
    return t;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t max_dimension) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows > max_dimension || cols > max_dimension) {
        std::ostringstream msg;
        msg << "kron result " << rows << "x" << cols << " exceeds maximum dimension "
            << max_dimension;
        throw SizeError(msg.str());
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Party traced) {
    require_bipartite(m, dimA, dimB, "partial_trace");
    if (traced == Party::B) {
        ComplexMatrix out(dimA, dimA);
        for (std::size_t i = 0; i < dimA; ++i) {
            for (std::size_t j = 0; j < dimA; ++j) {
                Complex s = 0.0;
                for (std::size_t k = 0; k < dimB; ++k) s += m(i * dimB + k, j * dimB + k);
                out(i, j) = s;
            }
        }
        return out;
    }
    ComplexMatrix out(dimB, dimB);
    for (std::size_t k = 0; k < dimB; ++k) {
        for (std::size_t l = 0; l < dimB; ++l) {
            Complex s = 0.0;
            for (std::size_t i = 0; i < dimA; ++i) s += m(i * dimB + k, i * dimB + l);
            out(k, l) = s;
        }
    }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                                Party party) {
    require_bipartite(m, dimA, dimB, "partial_transpose");
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < dimA; ++i) {
        for (std::size_t k = 0; k < dimB; ++k) {
            for (std::size_t j = 0; j < dimA; ++j) {
                for (std::size_t l = 0; l < dimB; ++l) {
                    const Complex v = m(i * dimB + k, j * dimB + l);
                    if (party == Party::B) {
                        out(i * dimB + l, j * dimB + k) = v;
                    } else {
                        out(j * dimB + k, i * dimB + l) = v;
                    }
                }
            }
        }
    }
    return out;
}

double hermiticity_residual(const ComplexMatrix& m) {
    if (!m.is_square()) throw ShapeError("hermiticity of a non-square matrix");
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i; j < m.cols(); ++j) {
            r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return r;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m, double tol, double convergence) {
    const double residual = hermiticity_residual(m);
    if (residual > tol) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: residual " << residual << " > " << tol;
        throw HermiticityError(msg.str());
    }
    const std::size_t n = m.rows();
    ComplexMatrix a = m + m.adjoint();
    a *= 0.5;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = a.frobenius_norm();
    const double threshold = convergence * std::max(scale, std::numeric_limits<double>::min());
    const std::size_t max_rotations = 10 * n * n;
    std::size_t rotations = 0;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (p != q) s += std::norm(a(p, q));
            }
        }
        return std::sqrt(s);
    };

    while (off_norm() > threshold) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag <= threshold / static_cast<double>(n * n)) continue;
                if (++rotations > max_rotations) {
                    std::ostringstream msg;
                    msg << "Jacobi eigensolver did not converge within " << max_rotations
                        << " rotations";
                    throw NumericError(msg.str());
                }
                // Rotate the phase of column/row q so that a(p,q) becomes real.
                const Complex u = std::conj(a(p, q)) / mag;
                for (std::size_t k = 0; k < n; ++k) {
                    a(k, q) *= u;
                    v(k, q) *= u;
                }
                for (std::size_t k = 0; k < n; ++k) a(q, k) *= std::conj(u);

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });
    HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
    return hermitian_eigen(m, tol).values;
}

DensityValidation validate_density(const ComplexMatrix& m, double tol) {
    DensityValidation report;
    report.hermiticity_residual = hermiticity_residual(m);
    report.trace_deviation = std::abs(m.trace() - Complex(1.0));
    // Spectrum of the Hermitian part; the residual above already records asymmetry.
    report.min_eigenvalue =
        hermitian_eigen(m, std::numeric_limits<double>::infinity()).values.front();
    report.passed = report.hermiticity_residual <= tol && report.trace_deviation <= tol &&
                    report.min_eigenvalue >= -tol;
    return report;
}

}  // namespace qlocality
