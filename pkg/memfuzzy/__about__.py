# -*- coding: utf-8 -*-

name = "memfuzzy"
version = "1.0.0"
author = "goldworm"
author_email = "goldworm@iconloop.com"
description = f"Memristor crossbar neuro-fuzzy edge detector {version}"
url = "https://github.com/goldworm-icon/memfuzzy"
