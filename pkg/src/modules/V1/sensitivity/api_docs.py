sensitivity_handler = {
    "summary": "Detectable lambda vs depth",
    "description": (
        "Smallest collapse rate whose CSL heating exceeds the muon background by the margin "
        "factor, over a depth grid per site. Writes lambda_scan_<site>.csv, the log-linear "
        "fit, lambda_depth.svg, and reports the surface estimate. With --target the depth "
        "reaching that lambda is solved for."
    ),
    "epilog": "Example: cslbg sensitivity --site gran_sasso --target 1e-16 --margin 100",
    "options": {
        "site": "Depth-intensity table name or CSV path (repeatable)",
        "depths": "Comma separated depths in km.w.e (default: table range in 0.5 steps)",
        "target": "Collapse rate (1/s) to solve the depth for",
        "rc": "Correlation length r_c in m",
        "params": "Mean muon energy parameter set",
    },
}

exclusion_handler = {
    "summary": "Lambda vs r_c contours",
    "description": (
        "Projected sensitivity contours in the (r_c, lambda) plane at given depths, one CSV "
        "per (site, depth) and exclusion.svg. Published bounds can be overlaid from "
        "r_c_m,lambda_per_s CSV files; they are drawn, never computed."
    ),
    "epilog": "Example: cslbg exclusion --site gran_sasso --depths 3.7,6.5 --overlay bound.csv",
    "options": {
        "site": "Depth-intensity table name or CSV path (repeatable)",
        "depths": "Comma separated depths in km.w.e",
        "rc_min": "Smallest r_c in m",
        "rc_max": "Largest r_c in m",
        "per_decade": "Grid points per decade of r_c",
        "overlay": "Overlay CSV with r_c_m,lambda_per_s columns (repeatable)",
        "params": "Mean muon energy parameter set",
    },
}

fit_handler = {
    "summary": "Weighted log-linear fit of a CSV",
    "description": (
        "Fit log10(y) = slope * x + intercept to a CSV with x,y,y_err columns, weighting by "
        "1/sigma^2 with sigma = y_err/(y ln 10). All-zero errors give an ordinary fit. Writes fit.csv."
    ),
    "epilog": "Example: cslbg fit out/muon_scan_gran_sasso_points.csv",
    "options": {"input": "CSV file with header x,y,y_err"},
}
