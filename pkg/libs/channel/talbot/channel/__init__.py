from talbot.field import NonPositiveDistance

from .matrix import (
    APPROX,
    EXACT,
    INGESTED,
    ChannelMatrix,
    MalformedInput,
    build_free_space,
    ingest_channel,
)
from .oam import OamChannel, to_oam_domain
