muon_scan_handler = {
    "summary": "Muon event rate and power vs depth",
    "description": (
        "Underground muon event rate and deposited power in a cubic absorber over a depth "
        "grid, one table per site. Writes muon_scan_<site>.csv, log-linear fits of rate and "
        "power vs depth, and muon_rate.svg / muon_power.svg with one series per site."
    ),
    "epilog": "Example: cslbg muon-scan --site gran_sasso --site standard_rock --out out/",
    "options": {
        "site": "Depth-intensity table name or CSV path (repeatable)",
        "depths": "Comma separated depths in km.w.e (default: table range in 0.5 steps)",
        "params": "Mean muon energy parameter set",
        "path_model": "Path length model: cube side or Monte Carlo mean chord",
        "mc_samples": "Rays sampled by the Monte Carlo path model",
        "workers": "Worker threads for the Monte Carlo path model",
    },
}
