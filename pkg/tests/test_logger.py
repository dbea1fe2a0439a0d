from eigensolver.utils.logger import get_logger, setup_logger, timed


def test_timed_accumulates_and_tags_phase():
    setup_logger("DEBUG")
    logger = get_logger()
    records = []
    sink = logger.add(lambda message: records.append(message.record), level="DEBUG")
    try:
        timings = {}
        for _ in range(2):
            with timed(timings, "cokernel"):
                logger.info("inside")
        logger.info("outside")
    finally:
        logger.remove(sink)

    assert set(timings) == {"cokernel"} and timings["cokernel"] >= 0.0
    phases = {r["message"]: r["extra"]["phase"] for r in records if r["message"] in ("inside", "outside")}
    assert phases == {"inside": "cokernel", "outside": "-"}
