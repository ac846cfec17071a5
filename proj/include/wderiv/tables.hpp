#pragma once

// Row catalogs for the printed-table regeneration command.  Each row carries
// the rational parameter texts, the numeric point, and which quantity the
// table tabulates (W itself, dW/dkappa, or dW/dmu).

#include <string>
#include <vector>

#include "wderiv/param_derivs.hpp"

namespace wderiv {

enum class table_quantity { w_value, dw_dkappa, dw_dmu };

struct table_row_def {
    std::string kappa_txt;
    std::string mu_txt;
    double kappa;
    double mu;
    bool fd_only = false;   // row published only through a replaced form; use the FD oracle
};

struct table_def {
    std::string id;
    table_quantity quantity;
    std::vector<table_row_def> rows;
};

inline const std::vector<table_def>& table_catalog() {
    static const std::vector<table_def> defs = [] {
        std::vector<table_def> t;
        t.push_back({"T1", table_quantity::dw_dkappa, {
            {"-3/4", "5/4", -0.75, 1.25},
            {"-1/4", "3/4", -0.25, 0.75},
            {"-1/6", "2/3", -1.0 / 6.0, 2.0 / 3.0},
            {"1/6", "1/3", 1.0 / 6.0, 1.0 / 3.0},
            {"1/4", "1/4", 0.25, 0.25},
            {"3/4", "1/4", 0.75, 0.25},
            {"5/6", "1/3", 5.0 / 6.0, 1.0 / 3.0},
            {"5/4", "3/4", 1.25, 0.75},
        }});
        t.push_back({"T2-DkW-half", table_quantity::dw_dkappa, {
            {"1", "1/2", 1.0, 0.5},
            {"2", "1/2", 2.0, 0.5},
            {"3", "1/2", 3.0, 0.5},
        }});
        t.push_back({"T2A", table_quantity::dw_dmu, {
            {"-3/4", "5/4", -0.75, 1.25},
            {"-1/4", "3/4", -0.25, 0.75},
            {"-1/6", "2/3", -1.0 / 6.0, 2.0 / 3.0},
            {"1/6", "1/3", 1.0 / 6.0, 1.0 / 3.0},
            {"1/4", "1/4", 0.25, 0.25},
            {"3/4", "1/4", 0.75, 0.25},
            {"5/6", "1/3", 5.0 / 6.0, 1.0 / 3.0},
            {"5/4", "3/4", 1.25, 0.75},
        }});
        t.push_back({"T2-DmK", table_quantity::dw_dmu, {
            {"0", "0", 0.0, 0.0},
            {"0", "1/4", 0.0, 0.25},
            {"0", "1/3", 0.0, 1.0 / 3.0},
            {"0", "1/2", 0.0, 0.5, true},
            {"0", "2/3", 0.0, 2.0 / 3.0},
            {"0", "3/4", 0.0, 0.75},
            {"0", "1", 0.0, 1.0, true},
            {"0", "3/2", 0.0, 1.5, true},
            {"0", "2", 0.0, 2.0, true},
        }});
        t.push_back({"T3", table_quantity::dw_dkappa, {
            {"-1/4", "3/4", -0.25, 0.75},
            {"1/4", "1/4", 0.25, 0.25},
            {"3/4", "1/4", 0.75, 0.25},
            {"5/4", "3/4", 1.25, 0.75},
        }});
        t.push_back({"T3A", table_quantity::dw_dkappa, {
            {"0", "1/2", 0.0, 0.5},
            {"0", "3/2", 0.0, 1.5},
            {"0", "5/2", 0.0, 2.5},
            {"1/2", "0", 0.5, 0.0},
            {"1/2", "1", 0.5, 1.0},
            {"1", "1/2", 1.0, 0.5},
            {"1", "3/2", 1.0, 1.5},
            {"3/2", "1", 1.5, 1.0},
            {"3/2", "2", 1.5, 2.0},
            {"2", "3/2", 2.0, 1.5},
        }});
        t.push_back({"T3B", table_quantity::dw_dmu, {
            {"0", "1/2", 0.0, 0.5},
            {"0", "3/2", 0.0, 1.5},
            {"0", "5/2", 0.0, 2.5},
            {"1/2", "1", 0.5, 1.0},
            {"1/2", "0", 0.5, 0.0},
            {"1", "1/2", 1.0, 0.5},
            {"1", "3/2", 1.0, 1.5},
            {"3/2", "1", 1.5, 1.0},
            {"3/2", "2", 1.5, 2.0},
            {"2", "3/2", 2.0, 1.5},
            {"2", "5/2", 2.0, 2.5},
        }});
        t.push_back({"T4", table_quantity::dw_dmu, {
            {"-1/4", "3/4", -0.25, 0.75},
            {"1/4", "1/4", 0.25, 0.25},
            {"3/4", "1/4", 0.75, 0.25},
            {"5/4", "3/4", 1.25, 0.75},
        }});
        table_def t5{"T5", table_quantity::w_value, {}};
        for (const auto& row : table5_rows())
            t5.rows.push_back({row.kappa_txt, row.mu_txt, row.kappa, row.mu});
        t.push_back(std::move(t5));
        return t;
    }();
    return defs;
}

inline const table_def* find_table(const std::string& id) {
    for (const auto& t : table_catalog())
        if (t.id == id) return &t;
    return nullptr;
}

} // namespace wderiv
