import os

import setuptools

here = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(here, "README.md"), "r") as fh:
    long_description = fh.read()

with open(os.path.join(here, "requirements.txt"), "r") as fh:
    install_requires = [line.strip() for line in fh if line.strip()]

about = {}
path = os.path.join(here, "memfuzzy/__about__.py")
with open(path, "r", encoding='utf-8') as f:
    exec(f.read(), about)

setuptools.setup(
    name=about["name"],
    version=about["version"],
    author=about["author"],
    author_email=about["author_email"],
    description=about["description"],
    url=about["url"],
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests"]),
    package_data={"memfuzzy": ["samples/*.rules"]},
    install_requires=install_requires,
    python_requires=">=3.7",
    classifiers=[
        "License :: OSI Approved :: Apache License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
    ],
    entry_points={
        'console_scripts': [
            'memfuzzy=memfuzzy.__main__:main'
        ]
    }
)
