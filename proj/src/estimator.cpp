// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/estimator.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mptlab
{
ImpactReport impact_factor(const ImpactParams& params)
{
    if (params.state_nodes < 0 || params.storage_nodes < 0 || params.account_leaves < 0 ||
        params.slot_leaves < 0)
        throw DomainError{"impact parameters must be non-negative"};
    if (params.depth_attacked < params.depth_base)
        throw DomainError{"attacked depth below baseline depth"};
    const double baseline = params.state_nodes + params.storage_nodes;
    if (baseline <= 0)
        throw DomainError{"baseline node count is zero"};

    const double deepen = params.depth_attacked - params.depth_base;
    ImpactReport report;
    report.state_nodes_attacked = params.state_nodes + params.account_leaves * deepen;
    report.storage_nodes_attacked = params.storage_nodes + params.slot_leaves * deepen;
    report.factor = (report.state_nodes_attacked + report.storage_nodes_attacked) / baseline;
    return report;
}

double GasPrice::in_coin() const
{
    switch (unit)
    {
    case GasPriceUnit::Gwei:
    case GasPriceUnit::NanoCoin:
        return value * 1e-9;
    case GasPriceUnit::Wei:
        return value * 1e-18;
    }
    return value;
}

GasPriceUnit gas_price_unit_from_string(const std::string& name)
{
    if (name == "gwei")
        return GasPriceUnit::Gwei;
    if (name == "nano")
        return GasPriceUnit::NanoCoin;
    if (name == "wei")
        return GasPriceUnit::Wei;
    throw DomainError{"unknown gas price unit: " + name};
}

double gas_units(double state_inserts, double storage_inserts, double storage_insert_gas,
    double state_insert_gas)
{
    if (state_inserts < 0 || storage_inserts < 0)
        throw DomainError{"insert counts must be non-negative"};
    return state_inserts * state_insert_gas + storage_inserts * storage_insert_gas;
}

double insert_count(double leaves, double depth_attacked, double depth_base)
{
    if (leaves < 0)
        throw DomainError{"leaf count must be non-negative"};
    if (depth_attacked < depth_base)
        throw DomainError{"attacked depth below baseline depth"};
    return leaves * (depth_attacked - depth_base) / 2.0;
}

double gas_cost_usd(const GasPrice& price_gas, double units_gas, double price_coin_usd)
{
    if (units_gas < 0 || price_coin_usd < 0 || price_gas.value < 0)
        throw DomainError{"cost inputs must be non-negative"};
    return price_gas.in_coin() * units_gas * price_coin_usd;
}

double gpu_cost_usd(double num_gpus, double hours, double price_per_gpu_hour)
{
    if (num_gpus < 0 || hours < 0 || price_per_gpu_hour < 0)
        throw DomainError{"cost inputs must be non-negative"};
    return num_gpus * hours * price_per_gpu_hour;
}

double gpu_time_hours(
    double theta_over_p_hours, double target_leaves, double depth_attacked, double depth_base)
{
    if (theta_over_p_hours < 0)
        throw DomainError{"per-target grind time must be non-negative"};
    const double goals = target_leaves * (depth_attacked - depth_base) / 2.0;
    if (goals < 1.0)
        throw DomainError{"multi-target grind needs at least one goal"};
    return theta_over_p_hours * std::log(goals);
}

double optimized_cost(double retained_cost_fraction, double base_cost_usd)
{
    if (retained_cost_fraction < 0 || retained_cost_fraction > 1)
        throw DomainError{"retained cost fraction must lie in [0, 1]"};
    return retained_cost_fraction * base_cost_usd;
}

CostReport total_cost(const CostParams& params)
{
    CostReport report;
    report.gas_usd = gas_cost_usd(params.price_gas, params.units_gas, params.price_coin_usd);
    report.gpu_usd = gpu_cost_usd(params.num_gpus, params.gpu_hours, params.gpu_price_usd);
    report.total_usd = report.gas_usd + report.gpu_usd;
    return report;
}

std::map<std::string, std::string> parse_params(std::istream& in)
{
    std::map<std::string, std::string> params;
    std::string line;
    while (std::getline(in, line))
    {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        const auto trim = [](std::string s)
        {
            const auto begin = s.find_first_not_of(" \t");
            if (begin == std::string::npos)
                return std::string{};
            const auto end = s.find_last_not_of(" \t");
            return s.substr(begin, end - begin + 1);
        };
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!key.empty())
            params[key] = value;
    }
    return params;
}

std::map<std::string, std::string> parse_params_file(const std::string& path)
{
    std::ifstream in{path};
    if (!in)
        throw std::runtime_error{"cannot open parameter file: " + path};
    return parse_params(in);
}

}  // namespace mptlab
