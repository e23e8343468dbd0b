import summa


def pytest_report_header(config):
    return f"summa kernel backend: {summa.BACKEND}"
