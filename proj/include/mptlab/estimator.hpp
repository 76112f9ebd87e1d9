// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace mptlab
{
/// Inputs of the node-proliferation impact model. Counts refer to nodes and
/// leaves involved in handling the deepened leaves over a workload window;
/// depths are layers and may be fractional averages.
struct ImpactParams
{
    double state_nodes = 0;      // account-trie nodes touched, before the attack
    double storage_nodes = 0;    // storage-trie nodes touched, before the attack
    double account_leaves = 0;   // deepened account leaves
    double slot_leaves = 0;      // deepened storage leaves
    double depth_base = 0;       // average layer without the attack
    double depth_attacked = 0;   // layer after deepening
};

struct ImpactReport
{
    double state_nodes_attacked = 0;
    double storage_nodes_attacked = 0;
    double factor = 1.0;  // attacked node count over baseline node count
};

/// Attacked node counts and their ratio to the baseline. Throws DomainError on
/// an empty baseline or depth_attacked < depth_base.
ImpactReport impact_factor(const ImpactParams& params);

enum class GasPriceUnit
{
    Gwei,      // 1e-9 of the native coin
    NanoCoin,  // same scale, different label on some chains
    Wei,       // 1e-18 of the native coin
};

struct GasPrice
{
    double value = 0;
    GasPriceUnit unit = GasPriceUnit::Gwei;

    double in_coin() const;
};

GasPriceUnit gas_price_unit_from_string(const std::string& name);

/// Gas needed to insert the crafted leaves: account insertions cost the flat
/// transfer price, storage insertions cost the configured write price.
double gas_units(double state_inserts, double storage_inserts,
    double storage_insert_gas = 44'258.0, double state_insert_gas = 21'000.0);

/// Crafted insertions needed to deepen `leaves` from depth_base to
/// depth_attacked when each insertion adds two layers.
double insert_count(double leaves, double depth_attacked, double depth_base);

double gas_cost_usd(const GasPrice& price_gas, double units_gas, double price_coin_usd);

double gpu_cost_usd(double num_gpus, double hours, double price_per_gpu_hour);

/// Single-GPU hours for the multi-target grind over
/// `target_leaves * (depth_attacked - depth_base) / 2` collision goals.
/// Throws DomainError when the logarithm argument drops below 1.
double gpu_time_hours(double theta_over_p_hours, double target_leaves, double depth_attacked,
    double depth_base);

/// Gas cost retained when only the most active leaves are deepened.
double optimized_cost(double retained_cost_fraction, double base_cost_usd);

/// One blockchain's cost inputs.
struct CostParams
{
    std::string name;
    double price_coin_usd = 0;
    GasPrice price_gas;
    double units_gas = 0;
    double num_gpus = 0;
    double gpu_hours = 0;
    double gpu_price_usd = 0;
};

struct CostReport
{
    double gas_usd = 0;
    double gpu_usd = 0;
    double total_usd = 0;
};

CostReport total_cost(const CostParams& params);

/// `key = value` parameter files; '#' starts a comment.
std::map<std::string, std::string> parse_params(std::istream& in);
std::map<std::string, std::string> parse_params_file(const std::string& path);

}  // namespace mptlab
