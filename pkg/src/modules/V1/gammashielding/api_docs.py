gamma_scan_handler = {
    "summary": "Gamma power vs shield thickness",
    "description": (
        "Deposited ambient-gamma power in a shielded cubic absorber as a function of shield "
        "thickness. Writes gamma_scan.csv, gamma_scan_fit.csv (log10 P vs thickness, when at "
        "least two thicknesses give non-zero power) and gamma_scan.svg."
    ),
    "epilog": "Example: cslbg gamma-scan --t-max 20 --steps 10 --out out/",
    "options": {
        "spectrum": "Spectrum name from the manifest or a CSV path",
        "shield": "Shield material (attenuation table name or CSV path)",
        "thicknesses": "Comma separated shield thicknesses in cm (overrides the range)",
        "t_max": "Largest thickness of the evenly spaced range, cm",
        "steps": "Number of thicknesses in the range",
        "area": "Faces receiving the ambient field",
        "mean_chord": "Use the mean chord 2l/3 instead of l as the detector path",
        "paper_fit": (
            "Integrate straight-line fits over fixed energy ranges instead of summing bins. "
            "Only the total changes: per-bin powers still come from the bins, so their sum need not equal "
            "the fitted total"
        ),
    },
}
