#pragma once

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aitg {

template <typename Scalar>
using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vec6d = Vec6<double>;
using VecXd = VecX<double>;

// Error carrying the pipeline stage that raised it and, for input problems,
// a field path such as "industries[3].scores.CTD".
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what, std::string path = {})
      : std::runtime_error(stage + ": " + what + (path.empty() ? "" : " (at " + path + ")")),
        stage_(std::move(stage)),
        path_(std::move(path)),
        detail_(what) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& path() const noexcept { return path_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string stage_;
  std::string path_;
  std::string detail_;
};

// Industry dimensions in registry column order.
enum class IndustryDim { CTD = 0, DRSA, PRI, RFF, CADR, CLSR };
inline constexpr std::array<std::string_view, 6> kIndustryDimNames{"CTD", "DRSA", "PRI",
                                                                   "RFF", "CADR", "CLSR"};

// Firm deployment dimensions.
enum class FirmDim { DIM = 0, PAC, WAR, DAR, APR, OAC };
inline constexpr std::array<std::string_view, 6> kFirmDimNames{"DIM", "PAC", "WAR",
                                                               "DAR", "APR", "OAC"};

inline int index_of(IndustryDim d) { return static_cast<int>(d); }
inline int index_of(FirmDim d) { return static_cast<int>(d); }

FirmDim parse_firm_dim(std::string_view name);

}  // namespace aitg
