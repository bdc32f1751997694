import csv
import logging
import math
import re
from pathlib import Path
from typing import Callable, Optional, Sequence, TypeVar

import yaml
from pydantic import ValidationError

from app.errors import DataFormatError
from app.utility import render_csv, write_text
from modules.V1.corephysics.models import MATERIALS
from modules.V1.corephysics.schemas import Material
from modules.V1.gammashielding.schemas import (
    AttenuationRow,
    AttenuationTable,
    GammaBin,
    GammaSpectrum,
    TableRuleError,
)
from modules.V1.muonbackground.schemas import DepthIntensityRow, DepthIntensityTable
from modules.V1.sensitivity.schemas import ContourPoint, FitPoint, OverlaySeries
from .schemas import (
    ATTENUATION_HEADER,
    DEPTH_HEADER,
    FIT_HEADER,
    OVERLAY_HEADER,
    SPECTRUM_HEADER,
    DataManifest,
    ParsedCsv,
)

logger = logging.getLogger(__name__)

METADATA_LINE = re.compile(r"^#\s*([A-Za-z_][A-Za-z0-9_]*)=(.*)$")

T = TypeVar("T")


class DataDAO:
    # -------------------- Parsing --------------------

    @staticmethod
    def read_csv(path: Path, header: Sequence[str]) -> ParsedCsv:
        """
        Read a numeric CSV. Blank lines and `#` comments are skipped; comments of
        the form `# key=value` before the header are kept as metadata.
        """
        name = str(path)
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise DataFormatError("file not found", path=name, rule="exists")
        except UnicodeDecodeError:
            raise DataFormatError("file is not UTF-8 text", path=name, rule="encoding")

        metadata: dict[str, str] = {}
        lines: list[int] = []
        rows: list[tuple[float, ...]] = []
        header_seen = False
        for number, raw in enumerate(csv.reader(text.splitlines()), start=1):
            if not raw or not "".join(raw).strip():
                continue
            first = raw[0].strip()
            if first.startswith("#"):
                match = METADATA_LINE.match(",".join(raw).strip())
                if match and not header_seen:
                    metadata[match.group(1)] = match.group(2).strip()
                continue
            cells = [c.strip() for c in raw]
            if not header_seen:
                if tuple(cells) != tuple(header):
                    raise DataFormatError(
                        f"expected header '{','.join(header)}', found '{','.join(cells)}'",
                        path=name,
                        line=number,
                        rule="header",
                    )
                header_seen = True
                continue
            if len(cells) != len(header):
                raise DataFormatError(
                    f"expected {len(header)} columns, found {len(cells)}",
                    path=name,
                    line=number,
                    rule="columns",
                )
            try:
                values = tuple(float(c) for c in cells)
            except ValueError:
                raise DataFormatError(
                    f"non-numeric value in '{','.join(cells)}'", path=name, line=number, rule="number"
                )
            if not all(math.isfinite(v) for v in values):
                raise DataFormatError("non-finite value", path=name, line=number, rule="finite")
            lines.append(number)
            rows.append(values)

        if not header_seen:
            raise DataFormatError("missing header line", path=name, rule="header")
        return ParsedCsv(path=name, metadata=metadata, lines=tuple(lines), rows=tuple(rows))

    @staticmethod
    def build(parsed: ParsedCsv, factory: Callable[[], T]) -> T:
        """Run a table constructor and map its rule violations to file lines."""
        try:
            return factory()
        except TableRuleError as exc:
            raise DataFormatError(
                exc.message, path=parsed.path, line=parsed.line_of(exc.row), rule=exc.rule
            )
        except ValidationError as exc:
            for error in exc.errors():
                cause = error.get("ctx", {}).get("error")
                if isinstance(cause, TableRuleError):
                    raise DataFormatError(
                        cause.message,
                        path=parsed.path,
                        line=parsed.line_of(cause.row),
                        rule=cause.rule,
                    )
            raise DataFormatError(
                f"invalid table: {exc.errors()[0]['msg']}", path=parsed.path, rule="schema"
            )

    # -------------------- Attenuation --------------------

    @staticmethod
    def load_attenuation(path: Path, material: Optional[Material] = None) -> AttenuationTable:
        parsed = DataDAO.read_csv(path, ATTENUATION_HEADER)
        if material is None:
            name = parsed.metadata.get("material", Path(path).stem)
            material = MATERIALS.get(name)
            if material is None:
                raise DataFormatError(
                    f"unknown material '{name}'; add '# material=<name>' with one of "
                    f"{sorted(MATERIALS)}",
                    path=str(path),
                    rule="material",
                )
        rows = tuple(
            AttenuationRow(energy=e, mu_over_rho_total=mu, mu_en_over_rho=mu_en)
            for e, mu, mu_en in parsed.rows
        )
        table = DataDAO.build(parsed, lambda: AttenuationTable(material=material, rows=rows))
        logger.debug("Loaded %d attenuation rows for %s from %s", len(rows), material.name, path)
        return table

    @staticmethod
    def save_attenuation(path: Path, table: AttenuationTable) -> Path:
        return write_text(
            path,
            render_csv(
                ATTENUATION_HEADER,
                ((r.energy, r.mu_over_rho_total, r.mu_en_over_rho) for r in table.rows),
                metadata={"material": table.material.name},
            ),
        )

    # -------------------- Gamma Spectrum --------------------

    @staticmethod
    def load_gamma_spectrum(path: Path) -> GammaSpectrum:
        parsed = DataDAO.read_csv(path, SPECTRUM_HEADER)
        rows = tuple(
            GammaBin(e_low=lo, e_high=hi, flux=flux, flux_err=err)
            for lo, hi, flux, err in parsed.rows
        )
        label = parsed.metadata.get("label", Path(path).stem)
        spectrum = DataDAO.build(parsed, lambda: GammaSpectrum(rows=rows, label=label))
        logger.debug("Loaded %d spectrum bins from %s", len(rows), path)
        return spectrum

    @staticmethod
    def save_gamma_spectrum(path: Path, spectrum: GammaSpectrum) -> Path:
        return write_text(
            path,
            render_csv(
                SPECTRUM_HEADER,
                ((b.e_low, b.e_high, b.flux, b.flux_err) for b in spectrum.rows),
                metadata={"label": spectrum.label} if spectrum.label else None,
            ),
        )

    # -------------------- Depth Intensity --------------------

    @staticmethod
    def load_depth_intensity(path: Path, site: Optional[str] = None) -> DepthIntensityTable:
        parsed = DataDAO.read_csv(path, DEPTH_HEADER)
        site = site or parsed.metadata.get("site", Path(path).stem)
        rows = tuple(
            DepthIntensityRow(depth=d, intensity=i, intensity_err=err) for d, i, err in parsed.rows
        )
        table = DataDAO.build(parsed, lambda: DepthIntensityTable(site=site, rows=rows))
        logger.debug("Loaded %d depth rows for %s from %s", len(rows), site, path)
        return table

    @staticmethod
    def save_depth_intensity(path: Path, table: DepthIntensityTable) -> Path:
        return write_text(
            path,
            render_csv(
                DEPTH_HEADER,
                ((r.depth, r.intensity, r.intensity_err) for r in table.rows),
                metadata={"site": table.site},
            ),
        )

    # -------------------- Overlays and Fit Input --------------------

    @staticmethod
    def load_overlay(path: Path, label: Optional[str] = None) -> OverlaySeries:
        parsed = DataDAO.read_csv(path, OVERLAY_HEADER)
        if not parsed.rows:
            raise DataFormatError("overlay has no rows", path=str(path), rule="min_rows")
        for row, line in zip(parsed.rows, parsed.lines):
            if row[0] <= 0 or row[1] <= 0:
                raise DataFormatError(
                    "r_c and lambda must be > 0", path=str(path), line=line, rule="positive"
                )
        points = tuple(ContourPoint(r_c=r_c, lambda_det=lam) for r_c, lam in parsed.rows)
        return OverlaySeries(
            label=label or parsed.metadata.get("label", Path(path).stem), points=points
        )

    @staticmethod
    def load_fit_points(path: Path) -> list[FitPoint]:
        parsed = DataDAO.read_csv(path, FIT_HEADER)
        for row, line in zip(parsed.rows, parsed.lines):
            if row[1] <= 0:
                raise DataFormatError("y must be > 0", path=str(path), line=line, rule="positive_y")
            if row[2] < 0:
                raise DataFormatError(
                    "y_err must be >= 0", path=str(path), line=line, rule="non_negative_error"
                )
        return [FitPoint(x=x, y=y, y_err=err) for x, y, err in parsed.rows]

    # -------------------- Manifest --------------------

    @staticmethod
    def load_manifest(path: Path) -> DataManifest:
        name = str(path)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                content = yaml.safe_load(fh) or {}
        except FileNotFoundError:
            raise DataFormatError("manifest not found", path=name, rule="exists")
        except yaml.YAMLError as exc:
            line = None
            mark = getattr(exc, "problem_mark", None)
            if mark is not None:
                line = mark.line + 1
            raise DataFormatError(f"invalid YAML: {exc}", path=name, line=line, rule="yaml")
        try:
            return DataManifest.model_validate(content)
        except ValidationError as exc:
            raise DataFormatError(
                f"invalid manifest: {exc.errors()[0]['msg']}", path=name, rule="manifest"
            )

    @staticmethod
    def save_manifest(path: Path, manifest: DataManifest) -> Path:
        text = yaml.safe_dump(
            manifest.model_dump(mode="json"), sort_keys=False, default_flow_style=False
        )
        return write_text(path, text)
