from dataclasses import dataclass

from talbot.geometry.layout import NonPositiveInput, check_positive

UNITS = ("m", "cm", "mm", "lambda")


@dataclass(frozen=True)
class Wavelength:
    """
    Carrier wavelength expressed in the length unit a config
    was written in. All physics downstream works in wavelengths,
    so this is the only place physical units are known.

    Args:
        value:
            The wavelength, in `units`
        units:
            One of `"m"`, `"cm"`, `"mm"` or `"lambda"`. For
            `"lambda"` lengths are already normalized and
            `value` must be 1.
    """

    value: float = 1.0
    units: str = "lambda"

    def __post_init__(self):
        check_positive(wavelength=self.value)
        if self.units not in UNITS:
            raise ValueError(
                "Unknown length units '{}', expected one of {}".format(
                    self.units, ", ".join(UNITS)
                )
            )
        if self.units == "lambda" and self.value != 1:
            raise NonPositiveInput(
                "A wavelength given in units of lambda must be 1, "
                f"got {self.value}"
            )

    def to_wavelengths(self, length: float) -> float:
        return length / self.value

    def from_wavelengths(self, length: float) -> float:
        return length * self.value

    def format(self, length: float, precision: int = 3) -> str:
        """Render a length given in wavelengths in the config's units"""
        label = "λ" if self.units == "lambda" else f" {self.units}"
        return f"{self.from_wavelengths(length):.{precision}f}{label}"
