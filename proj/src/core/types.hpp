#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qcb {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr cxd im_unit{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

// Error categories map 1:1 onto the C API status codes (and the CLI exit
// codes): invalid_argument -> 1, numerical -> 2, io -> 3.
enum class ErrorKind { invalid_argument = 1, numerical = 2, io = 3 };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& what) {
    throw Error(ErrorKind::invalid_argument, what);
}
[[noreturn]] inline void fail_numerical(const std::string& what) {
    throw Error(ErrorKind::numerical, what);
}
[[noreturn]] inline void fail_io(const std::string& what) {
    throw Error(ErrorKind::io, what);
}

} // namespace qcb
