#pragma once

// CSV export with shortest round-trip decimal formatting.

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "symred/systems.hpp"

namespace symred::csv {

inline std::string format(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_table(std::ostream& os, const std::vector<std::string>& header,
                        const MatrixX& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        os << (i ? "," : "") << header[i];
    os << "\n";
    for (int r = 0; r < rows.rows(); ++r) {
        for (int c = 0; c < rows.cols(); ++c) os << (c ? "," : "") << format(rows(r, c));
        os << "\n";
    }
}

namespace detail {

inline MatrixX with_monitors(const VectorX& times, const MatrixX& states,
                             const MonitorMap& monitors,
                             std::vector<std::string>& header,
                             const std::vector<std::string>& state_names) {
    const int n = static_cast<int>(times.size());
    MatrixX table(n, 1 + states.cols() + static_cast<int>(monitors.size()));
    header.clear();
    header.push_back("t");
    table.col(0) = times;
    for (int c = 0; c < states.cols(); ++c) {
        header.push_back(c < static_cast<int>(state_names.size())
                             ? state_names[c]
                             : "x" + std::to_string(c));
        table.col(1 + c) = states.col(c);
    }
    int c = 1 + static_cast<int>(states.cols());
    for (const auto& [name, series] : monitors) {
        header.push_back(name);
        table.col(c++) = series;
    }
    return table;
}

} // namespace detail

inline void write_trajectory(const std::string& path, const VectorTrajectory& traj,
                             const std::vector<std::string>& state_names = {}) {
    std::vector<std::string> header;
    const MatrixX table =
        detail::with_monitors(traj.times, traj.states, traj.monitors, header, state_names);
    std::ofstream os(path);
    write_table(os, header, table);
}

inline void write_trajectory(const std::string& path, const ProductTrajectory& traj) {
    const int n = static_cast<int>(traj.times.size());
    MatrixX states(n, 12);
    for (int k = 0; k < n; ++k) {
        const Rotation& g = traj.rotations[k];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) states(k, 3 * i + j) = g(i, j);
        states.row(k).tail(3) = traj.momenta.row(k);
    }
    std::vector<std::string> names;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            names.push_back("g" + std::to_string(i) + std::to_string(j));
    names.insert(names.end(), {"mu_x", "mu_y", "mu_z"});
    std::vector<std::string> header;
    const MatrixX table =
        detail::with_monitors(traj.times, states, traj.monitors, header, names);
    std::ofstream os(path);
    write_table(os, header, table);
}

inline void write_trajectory(const std::string& path, const GroupTrajectory& traj) {
    const int n = static_cast<int>(traj.times.size());
    MatrixX states(n, 9);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) states(k, 3 * i + j) = traj.states[k](i, j);
    std::vector<std::string> names;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            names.push_back("g" + std::to_string(i) + std::to_string(j));
    std::vector<std::string> header;
    const MatrixX table =
        detail::with_monitors(traj.times, states, traj.monitors, header, names);
    std::ofstream os(path);
    write_table(os, header, table);
}

} // namespace symred::csv
