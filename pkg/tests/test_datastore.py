import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from app.errors import DataFormatError, ValidationFailure
from app.settings import BUNDLED_DATA_DIR
from app.utility import sha256_of
from modules.V1.datastore.dao import DataDAO
from modules.V1.datastore.schemas import DataManifest, ManifestEntry
from modules.V1.datastore.services import DataService


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_manifest_lists_every_bundled_file():
    manifest = DataDAO.load_manifest(BUNDLED_DATA_DIR / "manifest.yaml")
    assert sorted(manifest.names("depth_intensity")) == ["gran_sasso", "standard_rock"]
    assert manifest.names("gamma_spectrum") == ["lngs_sample"]


def test_bundled_checksums_verify():
    paths = DataService(BUNDLED_DATA_DIR).verify_all()
    assert len(paths) == 5


def test_bundled_tables_load(gran_sasso, lead_table, spectrum):
    assert gran_sasso.site == "gran_sasso"
    assert gran_sasso.depth_range == (1.0, 8.0)
    assert lead_table.material.name == "lead"
    assert spectrum.label == "lngs_sample"
    assert len(spectrum.rows) == 12


def test_checksum_mismatch_is_a_data_format_error(data_copy):
    target = data_copy / "gran_sasso.csv"
    target.write_text(target.read_text(encoding="utf-8") + "# edited\n", encoding="utf-8")
    with pytest.raises(DataFormatError) as info:
        DataService(data_copy).depth_intensity("gran_sasso")
    assert info.value.rule == "checksum"


def test_checksums_can_be_skipped(data_copy):
    target = data_copy / "gran_sasso.csv"
    target.write_text(target.read_text(encoding="utf-8") + "# edited\n", encoding="utf-8")
    table = DataService(data_copy, verify_checksums=False).depth_intensity("gran_sasso")
    assert len(table.rows) == 15


def test_unknown_dataset_lists_what_is_available():
    with pytest.raises(ValidationFailure, match="gran_sasso"):
        DataService(BUNDLED_DATA_DIR).depth_intensity("kamioka")


def test_directory_without_manifest_resolves_by_name(tmp_path, caplog):
    write(
        tmp_path / "boulby.csv",
        "# site=boulby\ndepth_kmwe,intensity_cm2_s_sr,intensity_err\n2.0,1e-8,1e-9\n3.0,3e-9,3e-10\n",
    )
    table = DataService(tmp_path).depth_intensity("boulby")
    assert table.site == "boulby"
    assert "No manifest" in caplog.text


def test_explicit_csv_path_is_accepted(tmp_path):
    path = write(
        tmp_path / "site.csv",
        "depth_kmwe,intensity_cm2_s_sr,intensity_err\n2.0,1e-8,1e-9\n3.0,3e-9,3e-10\n",
    )
    assert DataService(BUNDLED_DATA_DIR).depth_intensity(str(path)).site == "site"


# -------------------- Parse errors carry file lines --------------------


@pytest.mark.parametrize(
    "body, line, rule",
    [
        ("depth,intensity\n1,2\n", 1, "header"),
        ("depth_kmwe,intensity_cm2_s_sr,intensity_err\n1.0,1e-8\n", 2, "columns"),
        ("depth_kmwe,intensity_cm2_s_sr,intensity_err\n1.0,abc,1e-9\n", 2, "number"),
        ("depth_kmwe,intensity_cm2_s_sr,intensity_err\n1.0,inf,1e-9\n", 2, "finite"),
        (
            "# comment\ndepth_kmwe,intensity_cm2_s_sr,intensity_err\n\n1.0,1e-8,1e-9\n2.0,2e-8,1e-9\n",
            5,
            "decreasing_intensity",
        ),
        (
            "depth_kmwe,intensity_cm2_s_sr,intensity_err\n1.0,1e-8,1e-9\n1.0,1e-9,1e-10\n",
            3,
            "increasing_depth",
        ),
        ("depth_kmwe,intensity_cm2_s_sr,intensity_err\n1.0,-1e-8,1e-9\n2.0,1e-9,1e-10\n", 2, "positive_intensity"),
    ],
)
def test_depth_table_errors_name_line_and_rule(tmp_path, body, line, rule):
    path = write(tmp_path / "table.csv", body)
    with pytest.raises(DataFormatError) as info:
        DataDAO.load_depth_intensity(path)
    assert info.value.line == line
    assert info.value.rule == rule
    assert f"{path}:{line}:" in info.value.message


def test_missing_file():
    with pytest.raises(DataFormatError) as info:
        DataDAO.load_depth_intensity(BUNDLED_DATA_DIR / "missing.csv")
    assert info.value.rule == "exists"


def test_non_utf8_file(tmp_path):
    path = tmp_path / "table.csv"
    path.write_bytes(b"depth_kmwe,intensity_cm2_s_sr,intensity_err\n\xff\xfe\n")
    with pytest.raises(DataFormatError) as info:
        DataDAO.load_depth_intensity(path)
    assert info.value.rule == "encoding"


def test_attenuation_rule_violation_names_row(tmp_path):
    path = write(
        tmp_path / "pb.csv",
        "# material=lead\nenergy_MeV,mu_total_cm2_g,mu_en_cm2_g\n0.1,5.5,2.0\n0.2,1.0,1.5\n",
    )
    with pytest.raises(DataFormatError) as info:
        DataDAO.load_attenuation(path)
    assert info.value.line == 4
    assert info.value.rule == "mu_en_le_mu_total"


def test_attenuation_material_must_be_known(tmp_path):
    path = write(tmp_path / "steel.csv", "energy_MeV,mu_total_cm2_g,mu_en_cm2_g\n0.1,1,0.5\n1,0.1,0.05\n")
    with pytest.raises(DataFormatError) as info:
        DataDAO.load_attenuation(path)
    assert info.value.rule == "material"


def test_invalid_manifest_yaml(tmp_path):
    path = write(tmp_path / "manifest.yaml", "entries:\n  - kind: [unclosed\n")
    with pytest.raises(DataFormatError) as info:
        DataDAO.load_manifest(path)
    assert info.value.rule == "yaml"
    assert info.value.line is not None


def test_manifest_rejects_duplicate_paths():
    entry = {"kind": "attenuation", "path": "pb.csv", "material_or_site": "lead"}
    with pytest.raises(ValueError):
        DataManifest.model_validate({"entries": [entry, entry]})


# -------------------- Round trips --------------------


def test_tables_survive_save_and_load(tmp_path, gran_sasso, lead_table, spectrum):
    assert DataDAO.load_depth_intensity(DataDAO.save_depth_intensity(tmp_path / "d.csv", gran_sasso)) == gran_sasso
    assert DataDAO.load_attenuation(DataDAO.save_attenuation(tmp_path / "a.csv", lead_table)) == lead_table
    assert DataDAO.load_gamma_spectrum(DataDAO.save_gamma_spectrum(tmp_path / "s.csv", spectrum)) == spectrum


def test_manifest_round_trip_with_checksum(tmp_path):
    checksum = sha256_of(BUNDLED_DATA_DIR / "pb.csv")
    manifest = DataManifest(
        entries=(ManifestEntry(kind="attenuation", path="pb.csv", material_or_site="lead", checksum=checksum),)
    )
    assert DataDAO.load_manifest(DataDAO.save_manifest(tmp_path / "m.yaml", manifest)) == manifest


def test_overlay_and_fit_inputs(tmp_path):
    overlay = DataDAO.load_overlay(
        write(tmp_path / "bound.csv", "# label=published\nr_c_m,lambda_per_s\n1e-7,1e-8\n1e-6,1e-6\n")
    )
    assert overlay.label == "published"
    assert len(overlay.points) == 2

    with pytest.raises(DataFormatError) as info:
        DataDAO.load_fit_points(write(tmp_path / "fit.csv", "x,y,y_err\n1,2,0.1\n2,0,0.1\n"))
    assert info.value.rule == "positive_y"
    assert info.value.line == 3


# -------------------- Loader fuzzing --------------------


@settings(max_examples=150, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(text=st.text(alphabet=st.sampled_from("0123456789.,-+eE#\n abcinf_"), max_size=200))
def test_loader_never_fails_unexpectedly(tmp_path, text):
    path = tmp_path / "fuzz.csv"
    path.write_text("depth_kmwe,intensity_cm2_s_sr,intensity_err\n" + text, encoding="utf-8")
    try:
        table = DataDAO.load_depth_intensity(path)
    except DataFormatError as exc:
        assert exc.rule
    else:
        assert len(table.rows) >= 2
