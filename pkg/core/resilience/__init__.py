from .cache import UnavailableOfferingsCache, record_interrupt, reoptimize

__all__ = ["UnavailableOfferingsCache", "record_interrupt", "reoptimize"]
