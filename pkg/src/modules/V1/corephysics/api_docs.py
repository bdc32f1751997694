csl_heating_handler = {
    "summary": "CSL heating of an absorber",
    "description": (
        "Print the CSL heating power (W), the heating rate per kilogram (W/kg) and the "
        "steady temperature rise R*W of a detector preset for a given collapse rate and "
        "correlation length."
    ),
    "epilog": "Example: cslbg csl-heating --lambda 1e-10 --rc 1e-7 --preset cuore",
    "options": {
        "lambda": "Collapse rate lambda in 1/s",
        "rc": "Correlation length r_c in m",
        "thermal": "Thermal preset supplying R (default: the preset of the same name, else cuore)",
    },
}
