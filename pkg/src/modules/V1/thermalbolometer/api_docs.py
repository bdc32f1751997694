bolometer_handler = {
    "summary": "Simulate a bolometer trace and recover the CSL gradient",
    "description": (
        "Synthetic temperature trace of an absorber-resistor-bath system with Poisson "
        "background pulses, optional fluctuation noise and a steady CSL gradient. Pulses are "
        "then detected and subtracted to recover the gradient. Writes trace.csv (with a "
        "'# key=value' metadata block) and events.csv."
    ),
    "epilog": "Example: cslbg bolometer --thermal cuore --lambda 1e-10 --duration 100 --seed 42",
    "options": {
        "thermal": "Thermal preset",
        "preset": "Detector preset for the muon background (default: the thermal preset's absorber)",
        "duration": "Trace length in s",
        "dt": "Sample interval in s",
        "rate": "Background event rate in 1/s (overridden by --site/--depth)",
        "energy": "Event energy in MeV (default: mean muon deposit when --site is given, else 1)",
        "lambda": "Collapse rate lambda in 1/s",
        "rc": "Correlation length r_c in m",
        "noise": "Add Gaussian fluctuation noise of std sqrt(k_B T^2 / C)",
        "threshold": "Pulse detection threshold in K (default: 10 x fluctuation floor)",
        "site": "Derive the event rate from this depth-intensity table",
        "depth": "Depth in km.w.e used with --site",
        "ensemble": "Also run this many seeds and report the mean recovered gradient",
    },
}
