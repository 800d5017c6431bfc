#pragma once

// Published comparison tables (percent units), rows T = 1..10. Columns:
// MC mean, MC error, eps-0th, eps-1st, eps-2nd, eps-3rd.

#include <array>

namespace qfbsde::testing {

using PublishedRow = std::array<double, 6>;
using PublishedTable = std::array<PublishedRow, 10>;

inline constexpr PublishedTable kTableEg1{{
    {23.061, 0.0003, 23.539, 23.035, 23.049, 23.049},
    {45.844, 0.0008, 47.769, 45.671, 45.787, 45.783},
    {68.197, 0.0013, 72.510, 67.691, 68.086, 68.067},
    {90.067, 0.0016, 97.630, 88.997, 89.919, 89.868},
    {111.455, 0.0018, 123.031, 109.560, 111.313, 111.207},
    {132.397, 0.0018, 148.639, 129.398, 132.317, 132.128},
    {152.938, 0.0019, 174.401, 148.552, 152.987, 152.685},
    {173.128, 0.0023, 200.278, 167.076, 173.377, 172.932},
    {193.011, 0.0031, 226.239, 185.028, 193.537, 192.918},
    {212.630, 0.0041, 252.263, 202.468, 213.508, 212.686},
}};

inline constexpr PublishedTable kTableEg6{{
    {24.340, 0.0020, 25.461, 23.896, 23.992, 23.988},
    {49.550, 0.0048, 54.541, 47.232, 48.090, 48.035},
    {73.840, 0.0061, 86.046, 68.269, 71.261, 71.038},
    {96.840, 0.0066, 119.177, 86.407, 93.441, 92.870},
    {118.640, 0.0066, 153.398, 101.609, 114.899, 113.761},
    {139.490, 0.0072, 188.350, 114.097, 135.960, 134.016},
    {159.560, 0.0093, 223.792, 124.189, 156.901, 153.913},
    {179.030, 0.0125, 259.561, 132.223, 177.919, 173.660},
    {198.030, 0.0161, 295.551, 138.520, 199.144, 193.404},
    {216.650, 0.0200, 331.688, 143.364, 220.643, 213.235},
}};

inline constexpr PublishedTable kTableZeg1{{
    {-4.293, 0.015, -4.442, -4.250, -4.258, -4.258},
    {-7.860, 0.042, -8.470, -7.725, -7.785, -7.783},
    {-10.760, 0.065, -12.055, -10.471, -10.661, -10.650},
    {-13.094, 0.082, -15.205, -12.594, -12.998, -12.972},
    {-14.974, 0.090, -17.950, -14.208, -14.907, -14.859},
    {-16.498, 0.092, -20.329, -15.420, -16.480, -16.403},
    {-17.740, 0.096, -22.384, -16.320, -17.787, -17.676},
    {-18.752, 0.118, -24.154, -16.984, -18.884, -18.736},
    {-19.588, 0.158, -25.675, -17.469, -19.812, -19.625},
    {-20.267, 0.211, -26.982, -17.820, -20.603, -20.377},
}};

inline constexpr PublishedTable kTableZeg6{{
    {-11.197, 0.241, -11.968, -10.460, -10.593, -10.586},
    {-19.537, 0.571, -24.096, -17.689, -18.749, -18.672},
    {-25.954, 0.730, -35.113, -21.253, -24.521, -24.252},
    {-29.546, 0.786, -44.602, -22.002, -28.764, -28.165},
    {-32.782, 0.797, -52.544, -20.930, -32.174, -31.134},
    {-34.411, 0.870, -59.084, -18.839, -35.154, -33.602},
    {-36.211, 1.116, -64.420, -16.287, -37.886, -35.788},
    {-37.186, 1.507, -68.754, -13.629, -40.427, -37.785},
    {-37.565, 1.931, -72.265, -11.071, -42.778, -39.617},
    {-38.079, 2.382, -75.108, -8.723, -44.925, -41.285},
}};

}  // namespace qfbsde::testing
