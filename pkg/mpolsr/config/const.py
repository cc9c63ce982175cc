"""
Configuration settings for MP-OLSR Sim.

This module contains the Constant settings shared by the protocol, the
coder and the simulator. Scenario files override the per-run subset.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Constant:
    """Constant settings for MP-OLSR Sim."""

    # Welcome, Logo in ASCII
    mpolsr_welcome: str = """
  #    #  #####           ####  #       ####  #####
  ##  ##  #    #         #    # #      #      #    #
  # ## #  #    #  #####  #    # #       ####  #    #
  #    #  #####          #    # #           # #####
  #    #  #              #    # #      #    # #   #
  #    #  #               ####  ######  ####  #    #

  BSD 3-Clause License

  Copyright (c) 2025, Alberto Barrago
  All rights reserved.
"""

    # Topology sensing (OLSR defaults, validity = 3 x interval)
    hello_interval_s = 2.0
    tc_interval_s = 5.0
    neighb_hold_multiplier = 3.0
    top_hold_multiplier = 3.0
    expiry_sweep_interval_s = 0.5

    # Control message sizes on the air (no bit-level format is modelled)
    hello_base_bytes = 16
    hello_entry_bytes = 4
    tc_base_bytes = 16
    tc_entry_bytes = 4

    # Multipath routing
    n_routes = 3
    fp_multiplier = 2
    fe_multiplier = 2
    recovery_cap = 3
    data_ttl = 32

    # Radio, MAC and mobility
    tx_range_m = 250.0
    bandwidth_bps = 11_000_000
    mac_overhead_bytes = 24
    mac_retry_limit = 7
    # ACK timeout plus channel re-acquisition before each retry
    mac_retry_interval_s = 0.004
    mobility_tick_s = 0.1
    pause_s = 0.0
    drain_s = 1.0

    # Traffic
    cbr_rate_pps = 10.0
    payload_bytes = 512

    # Multiple description coding
    mdc_n = 4
    mdc_m = 2
    mdc_group_size = 2
    # An open group is sent after interval x group_size x this factor
    mdc_flush_factor = 2.0
    mdc_header_bytes = 12
    mdc_bin_bytes = 2
    symbol_bits = 16

    # Sweep output
    csv_columns = (
        "variant",
        "max_speed_mps",
        "seed",
        "data_sent",
        "data_delivered",
        "delivery_ratio",
        "routing_load",
        "avg_delay_ms",
        "cov_load",
        "drops_no_route",
        "drops_link",
        "drops_recovery_limit",
    )
    max_batch_workers = 4

    # Error messages
    error_unknown_source = "Source {source} is not a node of the graph."
    error_no_route = "No route from {source} to {dest}."
    error_self_message = "Node {node} received its own HELLO; ignored."
    error_misrouted = (
        "Packet {flow}/{seq} is at node {node} but its header cursor points to {expected}."
    )
    error_insufficient = (
        "Only {available} distinct descriptions of group {group} (need {required})."
    )
    error_corrupt = "Description set for group {group} is inconsistent: {reason}."
    error_no_handler = "No handler registered for event kind '{kind}'."
    error_no_traffic = "No data packet was sent."
    error_nothing_delivered = "No data packet was delivered."
    error_zero_mean = "No node forwarded any data packet."
    error_unknown_key = "unknown scenario key '{key}'"
    error_bad_line = "expected 'key = value', got '{text}'"
    error_bad_value = "cannot read '{value}' as {kind} for '{key}'"
