"""Scenario configuration, sequencing, sweeps and output for the simulator."""
