#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qlocality {

using Complex = std::complex<double>;

enum class Party { A, B };

inline constexpr std::size_t kDefaultMaxDimension = 4096;
inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kEigenConvergence = 1e-12;

// Dense row-major complex matrix. Entries are always finite.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    // |v><v| for a column vector v.
    static ComplexMatrix outer(std::span<const Complex> v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const Complex> entries() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;
    // Largest entry modulus.
    double max_abs() const;
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex scale);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// max |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(a * b) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t max_dimension = kDefaultMaxDimension);

// Traces out `traced` from a (dimA*dimB)-sided operator.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Party traced);

// Transposes the tensor factor belonging to `party`. An involution.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                                Party party);

// max |m - m^dagger|.
double hermiticity_residual(const ComplexMatrix& m);

struct HermitianEigen {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k belongs to values[k]
};

// Cyclic complex Jacobi. The input is symmetrised after the hermiticity check.
// Throws HermiticityError beyond `tol`, NumericError after 10*n^2 rotations.
HermitianEigen hermitian_eigen(const ComplexMatrix& m, double tol = kDefaultTolerance,
                               double convergence = kEigenConvergence);

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                          double tol = kDefaultTolerance);

struct DensityValidation {
    double hermiticity_residual = 0.0;
    double trace_deviation = 0.0;  // |Tr(m) - 1|
    double min_eigenvalue = 0.0;   // of the Hermitian part
    bool passed = false;
};

// Report-style check: never throws for square input.
DensityValidation validate_density(const ComplexMatrix& m, double tol = kDefaultTolerance);

}  // namespace qlocality
