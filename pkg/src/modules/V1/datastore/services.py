import logging
from pathlib import Path
from typing import Optional

from app.errors import DataFormatError, ValidationFailure
from app.settings import get_settings
from app.utility import sha256_of
from modules.V1.gammashielding.schemas import AttenuationTable, GammaSpectrum
from modules.V1.muonbackground.schemas import DepthIntensityTable
from .dao import DataDAO
from .schemas import DataKind, DataManifest, ManifestEntry

logger = logging.getLogger(__name__)

DEFAULT_SPECTRUM = "lngs_sample"


class DataService:
    """Resolves named datasets through the manifest of a data directory."""

    def __init__(self, data_dir: Optional[Path] = None, verify_checksums: Optional[bool] = None):
        settings = get_settings().data
        self.data_dir = Path(data_dir) if data_dir is not None else settings.data_dir
        self.verify_checksums = (
            settings.verify_checksums if verify_checksums is None else verify_checksums
        )
        self.manifest_path = self.data_dir / settings.manifest_name
        self._manifest: Optional[DataManifest] = None

    @property
    def manifest(self) -> DataManifest:
        if self._manifest is None:
            if self.manifest_path.exists():
                self._manifest = DataDAO.load_manifest(self.manifest_path)
            else:
                logger.warning("No manifest at %s; files are resolved by name", self.manifest_path)
                self._manifest = DataManifest()
        return self._manifest

    # -------------------- Resolution --------------------

    def verify(self, entry: ManifestEntry) -> Path:
        path = self.data_dir / entry.path
        if not path.exists():
            raise DataFormatError("listed in the manifest but missing", path=str(path), rule="exists")
        if self.verify_checksums and entry.checksum:
            actual = sha256_of(path)
            if actual != entry.checksum:
                raise DataFormatError(
                    f"checksum mismatch (manifest {entry.checksum[:12]}..., file {actual[:12]}...)",
                    path=str(path),
                    rule="checksum",
                )
        return path

    def resolve(self, kind: DataKind, name: str) -> Path:
        """Path of a named dataset; an existing file path is accepted as is."""
        candidate = Path(name)
        if candidate.suffix == ".csv" and candidate.exists():
            return candidate
        entry = self.manifest.find(kind, name)
        if entry is not None:
            return self.verify(entry)
        fallback = self.data_dir / f"{name}.csv"
        if fallback.exists():
            return fallback
        raise ValidationFailure(
            f"no {kind} dataset named '{name}' in {self.data_dir}; "
            f"available: {sorted(self.manifest.names(kind))}"
        )

    # -------------------- Named Tables --------------------

    def attenuation(self, material: str) -> AttenuationTable:
        return DataDAO.load_attenuation(self.resolve("attenuation", material))

    def gamma_spectrum(self, name: str = DEFAULT_SPECTRUM) -> GammaSpectrum:
        return DataDAO.load_gamma_spectrum(self.resolve("gamma_spectrum", name))

    def depth_intensity(self, site: str) -> DepthIntensityTable:
        return DataDAO.load_depth_intensity(self.resolve("depth_intensity", site))

    def verify_all(self) -> list[Path]:
        return [self.verify(entry) for entry in self.manifest.entries]
