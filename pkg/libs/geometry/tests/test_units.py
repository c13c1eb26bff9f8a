import math

import pytest

from talbot.geometry import NonPositiveInput, Wavelength


class TestWavelength:
    def test_conversion(self):
        wavelength = Wavelength(10.0, "mm")
        assert math.isclose(wavelength.to_wavelengths(96.2), 9.62)
        assert math.isclose(wavelength.from_wavelengths(0.962), 9.62)
        assert wavelength.format(0.9623) == "9.623 mm"

    def test_lambda_units(self):
        wavelength = Wavelength()
        assert wavelength.to_wavelengths(150.0) == 150.0
        assert wavelength.format(2.566) == "2.566λ"
        with pytest.raises(NonPositiveInput):
            Wavelength(10.0, "lambda")

    def test_bad_values(self):
        with pytest.raises(NonPositiveInput):
            Wavelength(0.0, "mm")
        with pytest.raises(ValueError):
            Wavelength(1.0, "furlong")
